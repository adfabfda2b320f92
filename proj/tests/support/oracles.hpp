#pragma once

// Independent re-implementations used to cross-check derived values.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vcsim/procurement.hpp"
#include "vcsim/scenario.hpp"
#include "vcsim/sim_engine.hpp"

namespace vcsim::testing {

// Straight line-by-line recount of a rendered log with stream extraction.
struct NaiveCounts {
  std::int64_t total = 0;
  std::int64_t closed = 0;
  std::int64_t rejected = 0;
  std::int64_t cycle_sum = 0;  // over closed orders
  std::int64_t distinct_pos = 0;
  std::int64_t declines = 0;
  bool has_end = false;
};

NaiveCounts naive_recount(const std::string& log);

// The specified 64-bit LCG computed with 32-bit limbs, no 64-bit multiply.
class LimbLcg {
 public:
  explicit LimbLcg(std::uint64_t seed) : lo_(static_cast<std::uint32_t>(seed)), hi_(static_cast<std::uint32_t>(seed >> 32)) {}

  std::uint64_t next();
  std::uint64_t next_in(std::uint64_t lo, std::uint64_t hi) { return lo + (next() >> 32) % (hi - lo + 1); }

 private:
  std::uint32_t lo_;
  std::uint32_t hi_;
};

// Latency table for a seeded scenario built with LimbLcg.
sim::LatencyTable limb_latency_table(const scenario::Scenario& s);

// Σ qty × cost in 128 bits; nullopt when the exact value leaves int64.
std::optional<std::int64_t> wide_line_total(const std::vector<procurement::PlanLine>& lines);

// Total quantity ordered per sku.
std::map<Sku, Quantity> demand_by_sku(const scenario::Scenario& s);

}  // namespace vcsim::testing
