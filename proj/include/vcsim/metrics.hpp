#pragma once

// Performance figures derived from a rendered event log alone.

#include <cstdint>
#include <string>
#include <string_view>

#include "vcsim/core.hpp"

namespace vcsim::metrics {

enum class MetricsErrc { TruncatedLog, MalformedLog };

std::string_view to_string(MetricsErrc e);

using MetricsError = Error<MetricsErrc>;

struct Metrics {
  std::uint64_t orders_total = 0;
  std::uint64_t orders_closed = 0;
  std::uint64_t orders_rejected = 0;
  Rational fill_rate{1, 1};  // closed / total, 1 when there are no orders
  Rational mean_cycle_time;  // ticks from CustomerOrder delivery to Closed
  bool cycle_time_defined = false;
  std::uint64_t replenishments = 0;  // distinct po ids submitted
  std::uint64_t declines = 0;

  bool operator==(const Metrics&) const = default;
};

// Throws TruncatedLog unless the last line is an END marker.
Metrics compute_metrics(std::string_view log);

// Flat JSON object; rationals appear as "n/d" plus a six-decimal string.
std::string to_json(const Metrics& m);

}  // namespace vcsim::metrics
