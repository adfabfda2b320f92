#include "vcsim/metrics.hpp"

#include <charconv>
#include <map>
#include <set>
#include <vector>

#include "json.hpp"

namespace vcsim::metrics {

std::string_view to_string(MetricsErrc e) {
  switch (e) {
    case MetricsErrc::TruncatedLog: return "TruncatedLog";
    case MetricsErrc::MalformedLog: return "MalformedLog";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(MetricsErrc code, std::size_t line, const std::string& detail) {
  throw MetricsError(code, std::string(to_string(code)) + " at line " + std::to_string(line) + ": " + detail);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t end = std::min(line.find(' ', pos), line.size());
    out.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) fail(MetricsErrc::MalformedLog, line, "bad number");
  return v;
}

}  // namespace

Metrics compute_metrics(std::string_view log) {
  std::map<std::string, std::uint64_t, std::less<>> opened;  // order -> arrival tick
  std::set<std::string, std::less<>> closed;
  std::set<std::string, std::less<>> rejected;
  std::set<std::string, std::less<>> po_ids;
  std::uint64_t declines = 0;
  std::int64_t cycle_sum = 0;
  bool ended = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < log.size()) {
    const std::size_t end = std::min(log.find('\n', pos), log.size());
    const std::string_view line = log.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (ended) fail(MetricsErrc::MalformedLog, line_no, "content after END");

    const auto f = split(line);
    if (f.empty()) fail(MetricsErrc::MalformedLog, line_no, "empty line");
    if (f[0] == "END") {
      if (f.size() != 3) fail(MetricsErrc::MalformedLog, line_no, "END arity");
      ended = true;
    } else if (f[0] == "MSG") {
      if (f.size() < 6) fail(MetricsErrc::MalformedLog, line_no, "MSG arity");
      const std::uint64_t at = parse_u64(f[1], line_no);
      const std::string_view variant = f[5];
      if (variant == "CustomerOrder") {
        if (f.size() != 10) fail(MetricsErrc::MalformedLog, line_no, "CustomerOrder arity");
        if (!opened.emplace(std::string(f[6]), at).second) fail(MetricsErrc::MalformedLog, line_no, "duplicate order");
      } else if (variant == "ShipGoodsResponse") {
        if (f.size() >= 8 && f[7] == "Decline") ++declines;
      } else if (variant == "POSubmit") {
        if (f.size() != 9) fail(MetricsErrc::MalformedLog, line_no, "POSubmit arity");
        po_ids.emplace(f[6]);
      }
    } else if (f[0] == "NOTE") {
      if (f.size() == 5 && f[2] == "order") {
        const std::uint64_t at = parse_u64(f[1], line_no);
        auto it = opened.find(f[3]);
        if (f[4] == "Closed") {
          if (it == opened.end()) fail(MetricsErrc::MalformedLog, line_no, "close of unknown order");
          closed.emplace(f[3]);
          cycle_sum = checked_add(cycle_sum, static_cast<std::int64_t>(at - it->second));
        } else if (f[4] == "Rejected") {
          if (it == opened.end()) fail(MetricsErrc::MalformedLog, line_no, "rejection of unknown order");
          rejected.emplace(f[3]);
        }
      }
    } else if (f[0] != "INV") {
      fail(MetricsErrc::MalformedLog, line_no, "unknown record '" + std::string(f[0]) + "'");
    }
  }
  if (!ended) fail(MetricsErrc::TruncatedLog, line_no, "missing END marker");

  Metrics m;
  m.orders_total = opened.size();
  m.orders_closed = closed.size();
  m.orders_rejected = rejected.size();
  if (m.orders_total > 0) {
    m.fill_rate = Rational(static_cast<std::int64_t>(m.orders_closed), static_cast<std::int64_t>(m.orders_total));
  }
  if (m.orders_closed > 0) {
    m.mean_cycle_time = Rational(cycle_sum, static_cast<std::int64_t>(m.orders_closed));
    m.cycle_time_defined = true;
  }
  m.replenishments = po_ids.size();
  m.declines = declines;
  return m;
}

std::string to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["orders_total"] = m.orders_total;
  j["orders_closed"] = m.orders_closed;
  j["orders_rejected"] = m.orders_rejected;
  j["fill_rate"] = m.fill_rate.fraction();
  j["fill_rate_decimal"] = m.fill_rate.decimal6();
  j["mean_cycle_time"] = m.mean_cycle_time.fraction();
  j["mean_cycle_time_decimal"] = m.mean_cycle_time.decimal6();
  j["cycle_time_defined"] = m.cycle_time_defined;
  j["replenishments"] = m.replenishments;
  j["declines"] = m.declines;
  return j.dump(2) + "\n";
}

}  // namespace vcsim::metrics
