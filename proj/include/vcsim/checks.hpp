#pragma once

// Post-run invariant checks over a finished world and its event log.

#include <cstdint>
#include <string>
#include <vector>

#include "vcsim/core.hpp"
#include "vcsim/scenario.hpp"

namespace vcsim::checks {

struct Violation {
  std::string invariant;
  std::string detail;
};

struct CheckReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(std::string_view invariant) const;
};

struct ConservationTotals {
  Quantity initial = 0;
  Quantity manufacturer_deliveries = 0;
  Quantity shipped_to_buyers = 0;
  Quantity final_on_hand = 0;

  bool balanced() const noexcept { return shipped_to_buyers + final_on_hand == initial + manufacturer_deliveries; }
};

ConservationTotals conservation_totals(const scenario::World& world);

// Upper bound on deliveries attributable to one order: the order itself, a
// request and a first answer per warehouse, four closing messages, at most
// W-1 cancellations, and per replenishment its submit, ack, delivery and
// re-answer (plus a duplicate submit and ack when duplicates are injected).
std::uint64_t order_event_bound(std::size_t warehouses, std::size_t replenishments, bool duplicates);

// Every invariant below is evaluated; all violations are reported.
//   conservation, ledger-replay, zero-reserved, quiescence, order-terminal,
//   procurement-chain, po-delivery, po-ack, decline-po, accept-capacity,
//   clock-order, causality, latency, spontaneous, order-bound
CheckReport check_run(const scenario::Scenario& s, const scenario::World& world);

}  // namespace vcsim::checks
