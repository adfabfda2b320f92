// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "support/fuzz.hpp"
#include "support/oracles.hpp"
#include "support/procurement_fuzz.hpp"
#include "vcsim/checks.hpp"
#include "vcsim/metrics.hpp"
#include "vcsim/party_model.hpp"
#include "vcsim/scenario.hpp"

using namespace vcsim;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void report(int number, const std::string& title, double limit_ms, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (limit_ms > 0 && ms >= limit_ms) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "took %.3f ms, limit %.0f ms", ms, limit_ms);
    out.fail(buf);
  }
  if (!out.pass) ++failures;
  std::printf("[%s] %d. %s (%.3f ms)%s%s\n", out.pass ? "PASS" : "FAIL", number, title.c_str(), ms,
              out.detail.empty() ? "" : ": ", out.detail.c_str());
  std::fflush(stdout);
}

std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(VCSIM_SCENARIO_DIR)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string first_violation(const checks::CheckReport& r) {
  return r.violations.empty() ? std::string() : r.violations.front().invariant + ": " + r.violations.front().detail;
}

// Variant names of delivered messages, in delivery order.
std::vector<std::string> arrows(const sim::EventLog& log) {
  std::vector<std::string> out;
  for (const auto& entry : log.entries()) {
    if (const auto* e = std::get_if<sim::Envelope>(&entry)) out.emplace_back(protocol::variant_name(e->payload));
  }
  return out;
}

constexpr std::uint64_t kFuzzScenarios = 500;
constexpr std::uint64_t kFuzzSeedBase = 1'000'000;

}  // namespace

int main() {
  report(1, "relationship inverses form an involution with the four stated pairs", 1.0, [] {
    using party::RelationshipType;
    Outcome out;
    std::set<RelationshipType> images;
    for (const auto t : party::kAllRelationshipTypes) {
      if (party::inverse_of(party::inverse_of(t)) != t) out.fail("inverse is not an involution");
      if (party::inverse_of(t) == t) out.fail("a label is its own inverse");
      images.insert(party::inverse_of(t));
    }
    if (images.size() != 8) out.fail("inverse is not a bijection over the 8 labels");
    const std::pair<RelationshipType, RelationshipType> pairs[] = {
        {RelationshipType::SupplierTo, RelationshipType::DistributorFor},
        {RelationshipType::ClientOf, RelationshipType::ContractorTo},
        {RelationshipType::ReportTo, RelationshipType::ManagerOf},
        {RelationshipType::CustomerOf, RelationshipType::SellerTo},
    };
    for (const auto& [a, b] : pairs) {
      if (party::inverse_of(a) != b || party::inverse_of(b) != a) out.fail("stated pair does not hold");
    }
    return out;
  });

  report(2, "procurement traces stay on the stage chain; refused calls leave state unchanged (10000 sequences)",
         5000.0, [] {
           Outcome out;
           std::uint64_t refused = 0, booked = 0;
           for (std::uint64_t seed = 0; seed < 10000; ++seed) {
             const auto r = testing::fuzz_procurement(seed);
             refused += r.rejected_calls;
             booked += r.booked;
             if (!r.ok()) out.fail(r.problems.front());
           }
           if (refused == 0 || booked == 0) out.fail("sequences never exercised both refusals and full chains");
           return out;
         });

  // Criteria 3 and 4 share one pass over the fuzzed scenarios.
  std::vector<Outcome> fuzz_outcomes(2);
  double fuzz_ms = 0;
  {
    const auto start = Clock::now();
    for (std::uint64_t i = 0; i < kFuzzScenarios; ++i) {
      const std::uint64_t seed = kFuzzSeedBase + i;
      const std::string tag = "seed " + std::to_string(seed);
      try {
        const auto s = testing::fuzz_scenario(seed);
        const auto run = scenario::run_scenario(s);
        const auto totals = checks::conservation_totals(*run.world);
        if (!totals.balanced()) fuzz_outcomes[0].fail(tag + " does not balance");
        const auto checked = checks::check_run(s, *run.world);
        for (const char* inv : {"conservation", "ledger-replay"}) {
          if (checked.has(inv)) fuzz_outcomes[0].fail(tag + " " + first_violation(checked));
        }
        for (const char* inv : {"quiescence", "order-terminal", "zero-reserved"}) {
          if (checked.has(inv)) fuzz_outcomes[1].fail(tag + " " + first_violation(checked));
        }
      } catch (const std::exception& e) {
        fuzz_outcomes[0].fail(tag + ": " + e.what());
        fuzz_outcomes[1].fail(tag + ": " + e.what());
      }
    }
    fuzz_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }
  report(3, "goods conservation holds exactly on 500 fuzzed scenarios", 0, [&] {
    Outcome out = fuzz_outcomes[0];
    if (fuzz_ms >= 30000.0) out.fail("took " + std::to_string(fuzz_ms) + " ms, limit 30000 ms");
    if (out.pass) out.detail = "fuzz pass " + std::to_string(static_cast<long>(fuzz_ms)) + " ms";
    return out;
  });
  report(4, "every order terminates, runs quiesce within max_events, nothing left reserved", 0,
         [&] { return fuzz_outcomes[1]; });

  report(5, "declines lead to one acknowledged PO each and at most one delivery despite duplicates (20 scenarios)",
         0, [] {
           Outcome out;
           testing::FuzzLimits limits;
           limits.force_shortage = true;
           limits.duplicates = testing::Duplicates::Always;
           for (std::uint64_t seed = 1; seed <= 20; ++seed) {
             const std::string tag = "scenario " + std::to_string(seed);
             const auto s = testing::fuzz_scenario(seed, limits);
             const auto run = scenario::run_scenario(s);
             const auto checked = checks::check_run(s, *run.world);
             if (!checked.ok()) out.fail(tag + " " + first_violation(checked));

             // Independent log walk. A PO must come from the same handler
             // invocation as a Decline, sent after it.
             std::map<std::pair<PartyId, std::uint64_t>, std::uint64_t> decline_seq;  // (warehouse, cause) -> seq
             std::map<std::string, int> submits, acks, deliveries;
             std::vector<const sim::Envelope*> first_submits;
             int declines = 0;
             for (const auto& entry : run.log().entries()) {
               const auto* e = std::get_if<sim::Envelope>(&entry);
               if (!e) continue;
               if (const auto* r = std::get_if<protocol::ShipGoodsResponse>(&e->payload)) {
                 if (std::holds_alternative<protocol::Decline>(r->verdict)) {
                   ++declines;
                   decline_seq.emplace(std::pair(e->from, e->cause.value_or(~0ULL)), e->seq);
                 }
               } else if (const auto* m = std::get_if<protocol::POSubmit>(&e->payload)) {
                 if (submits[m->po_id.str()]++ == 0) first_submits.push_back(e);
               } else if (const auto* m = std::get_if<protocol::POAck>(&e->payload)) {
                 ++acks[m->po_id.str()];
               } else if (const auto* m = std::get_if<protocol::GoodsDelivery>(&e->payload)) {
                 ++deliveries[m->po_id.str()];
               }
             }
             for (const auto* e : first_submits) {
               auto d = decline_seq.find(std::pair(e->from, e->cause.value_or(~0ULL)));
               if (d == decline_seq.end() || d->second > e->seq) {
                 out.fail(tag + " " + std::get<protocol::POSubmit>(e->payload).po_id.str() +
                          " submitted without a preceding decline");
               }
             }
             if (declines == 0) out.fail(tag + " has no shortage");
             for (const auto& [po, n] : submits) {
               // The original submit plus its injected duplicate, each acknowledged.
               if (n != 2 || acks[po] != n) {
                 out.fail(tag + " " + po + " has " + std::to_string(n) + " submits, " + std::to_string(acks[po]) +
                          " acks");
               }
               if (deliveries[po] != 1) out.fail(tag + " " + po + " delivered " + std::to_string(deliveries[po]) + " times");
             }
             for (const auto& [po, n] : deliveries) {
               if (!submits.contains(po)) out.fail(tag + " delivery for unsubmitted " + po);
             }
           }
           return out;
         });

  report(6, "replay is byte-identical across runs and across both generator implementations", 0, [] {
    Outcome out;
    std::vector<std::pair<std::string, scenario::Scenario>> suite;
    for (const auto& file : corpus()) suite.emplace_back(file.filename().string(), scenario::load_scenario(file));
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      suite.emplace_back("fuzz " + std::to_string(seed), testing::fuzz_scenario(seed));
    }
    int seeded = 0;
    for (const auto& [name, s] : suite) {
      const auto r = scenario::replay_check(s);
      if (!r.pass) out.fail(name + " differs at line " + std::to_string(r.line));
      const auto limb = testing::limb_latency_table(s);
      if (s.latency.seeded) ++seeded;
      if (!(limb == scenario::build_latency_table(s))) out.fail(name + " latency tables differ");
      const auto cmp = scenario::compare_logs(scenario::run_scenario(s).rendered,
                                              scenario::run_scenario(s, limb).rendered);
      if (!cmp.pass) out.fail(name + " generator runs differ at line " + std::to_string(cmp.line));
    }
    if (seeded == 0) out.fail("no seeded-latency scenario exercised");
    return out;
  });

  report(7, "metrics equal an independent recount on every corpus and fuzz log", 0, [] {
    Outcome out;
    std::vector<std::string> logs;
    for (const auto& file : corpus()) logs.push_back(scenario::run_scenario(scenario::load_scenario(file)).rendered);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      logs.push_back(scenario::run_scenario(testing::fuzz_scenario(seed)).rendered);
    }
    for (std::size_t i = 0; i < logs.size(); ++i) {
      const auto m = metrics::compute_metrics(logs[i]);
      const auto n = testing::naive_recount(logs[i]);
      const std::string tag = "log " + std::to_string(i);
      const bool counts = static_cast<std::int64_t>(m.orders_total) == n.total &&
                          static_cast<std::int64_t>(m.orders_closed) == n.closed &&
                          static_cast<std::int64_t>(m.orders_rejected) == n.rejected &&
                          static_cast<std::int64_t>(m.replenishments) == n.distinct_pos &&
                          static_cast<std::int64_t>(m.declines) == n.declines;
      if (!counts) out.fail(tag + " counts differ");
      const bool fill = n.total == 0 ? m.fill_rate == Rational(1, 1)
                                     : m.fill_rate.num() * n.total == n.closed * m.fill_rate.den();
      if (!fill) out.fail(tag + " fill rate differs");
      const bool cycle = n.closed == 0 ? !m.cycle_time_defined
                                       : m.cycle_time_defined &&
                                             m.mean_cycle_time.num() * n.closed == n.cycle_sum * m.mean_cycle_time.den();
      if (!cycle) out.fail(tag + " cycle time differs");
    }
    return out;
  });

  report(8, "reference scenario fills every order in under 1 s; single order follows the arrow sequence", 0, [] {
    Outcome out;
    const auto s = scenario::load_scenario(std::string(VCSIM_SCENARIO_DIR) + "/reference.json");
    if (s.warehouses.size() != 3 || s.manufacturers.size() != 2 || s.orders.size() != 100) {
      out.fail("reference scenario has the wrong shape");
    }
    for (const auto& w : s.warehouses) {
      if (w.reorder_qty != 20) out.fail("reorder_qty is not 20");
    }
    for (const auto& m : s.manufacturers) {
      if (m.production_delay != 3) out.fail("production_delay is not 3");
    }
    // Brute-force sizing: every sku's demand fits in one warehouse's opening stock.
    for (const auto& [sku, demand] : testing::demand_by_sku(s)) {
      Quantity best = 0;
      for (const auto& w : s.warehouses) {
        auto it = s.inventory.find(w.id);
        if (it != s.inventory.end() && it->second.contains(sku)) best = std::max(best, it->second.at(sku));
      }
      if (demand > best) out.fail(sku.str() + " demand " + std::to_string(demand) + " exceeds stock");
    }
    const auto start = Clock::now();
    const auto run = scenario::run_scenario(s);
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    if (ms >= 1000.0) out.fail("reference run took " + std::to_string(ms) + " ms");
    const auto m = metrics::compute_metrics(run.rendered);
    if (!(m.fill_rate == Rational(1, 1))) out.fail("fill rate " + m.fill_rate.fraction());
    if (!checks::check_run(s, *run.world).ok()) out.fail("reference run violates an invariant");

    const auto single = scenario::run_scenario(
        scenario::load_scenario(std::string(VCSIM_SCENARIO_DIR) + "/single_order.json"));
    std::vector<std::string> seen;
    for (auto& name : arrows(single.log())) {
      if (name != "CancelReservation") seen.push_back(name);
    }
    const std::vector<std::string> expected = {
        "CustomerOrder",     "ShipGoodsRequest",  "ShipGoodsRequest", "ShipGoodsRequest",
        "ShipGoodsResponse", "ShipGoodsResponse", "ShipGoodsResponse", "ShipConfirm",
        "OrderInvoice",      "GoodsShipped",      "Payment"};
    if (seen != expected) out.fail("single-order arrow sequence differs");
    if (out.pass) out.detail = "reference run " + std::to_string(ms) + " ms";
    return out;
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
