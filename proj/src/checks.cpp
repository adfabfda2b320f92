#include "vcsim/checks.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace vcsim::checks {

namespace {

using protocol::OrderId;
using protocol::PoId;
using protocol::RequestId;

struct Recorder {
  CheckReport& report;
  void operator()(std::string invariant, std::string detail) const {
    report.violations.push_back({std::move(invariant), std::move(detail)});
  }
};

std::vector<const sim::Envelope*> delivered(const sim::EventLog& log) {
  std::vector<const sim::Envelope*> out;
  for (const auto& entry : log.entries()) {
    if (const auto* e = std::get_if<sim::Envelope>(&entry)) out.push_back(e);
  }
  return out;
}

void check_ledgers(const scenario::World& world, const Recorder& fail) {
  const ConservationTotals totals = conservation_totals(world);
  if (!totals.balanced()) {
    fail("conservation", "shipped " + std::to_string(totals.shipped_to_buyers) + " + on_hand " +
                             std::to_string(totals.final_on_hand) + " != initial " + std::to_string(totals.initial) +
                             " + deliveries " + std::to_string(totals.manufacturer_deliveries));
  }
  for (const auto& [owner, ledger] : world.ledgers()) {
    if (inventory::Ledger::replay(ledger->history()) != ledger->rows()) {
      fail("ledger-replay", owner.str() + " history does not replay to its stock rows");
    }
    if (ledger->total_reserved() != 0) {
      fail("zero-reserved", owner.str() + " holds " + std::to_string(ledger->total_reserved()) + " reserved");
    }
  }
}

void check_orders(const scenario::Scenario& s, const scenario::World& world, const Recorder& fail) {
  if (world.simulation().queue_size() != 0 || !world.simulation().log().complete()) {
    fail("quiescence", "run did not reach an empty queue");
  }
  const auto& open = world.retailer().open_orders;
  if (open.size() != s.orders.size()) {
    fail("order-terminal", std::to_string(open.size()) + " orders seen, " + std::to_string(s.orders.size()) +
                               " declared");
  }
  for (const auto& [id, order] : open) {
    if (order.phase != protocol::OrderPhase::Closed && order.phase != protocol::OrderPhase::Rejected) {
      fail("order-terminal", id.str() + " ended in " + std::string(protocol::to_string(order.phase)));
    }
  }
}

void check_procurement(const scenario::Scenario& s, const scenario::World& world, const Recorder& fail) {
  for (const auto& w : s.warehouses) {
    const auto& store = world.warehouse(w.id).procurement;
    std::map<procurement::PlanId, std::vector<procurement::ProcurementState>> traces;
    for (const auto& t : store.transitions()) traces[t.plan].push_back(t.state);
    for (const auto& [plan, trace] : traces) {
      for (std::size_t i = 0; i < trace.size(); ++i) {
        if (static_cast<std::size_t>(trace[i]) != i) {
          fail("procurement-chain", w.id.str() + " plan " + std::to_string(plan.value) + " is not a chain prefix");
          break;
        }
      }
      if (trace.back() != procurement::ProcurementState::Booked) {
        fail("procurement-chain", w.id.str() + " plan " + std::to_string(plan.value) + " stopped at " +
                                      std::string(procurement::to_string(trace.back())));
      }
    }
  }
}

void check_messages(const scenario::Scenario& s, const scenario::World& world, const Recorder& fail) {
  const auto& sim = world.simulation();
  const auto envelopes = delivered(sim.log());
  const bool duplicates = s.params.inject_duplicate_po_submit;

  std::map<std::uint64_t, const sim::Envelope*> by_seq;
  std::map<std::uint64_t, OrderId> root;
  std::map<OrderId, std::uint64_t> per_order;
  std::map<OrderId, std::set<PoId>> order_pos;
  std::map<RequestId, Quantity> requested;
  std::map<PoId, int> submits, acks, deliveries;
  std::size_t first_declines = 0;

  const sim::Envelope* prev = nullptr;
  for (const sim::Envelope* e : envelopes) {
    if (prev && std::pair(prev->deliver_at, prev->seq) >= std::pair(e->deliver_at, e->seq)) {
      fail("clock-order", "seq " + std::to_string(e->seq) + " delivered out of (time, seq) order");
    }
    prev = e;

    if (e->cause) {
      auto cause = by_seq.find(*e->cause);
      if (cause == by_seq.end()) {
        fail("spontaneous", "seq " + std::to_string(e->seq) + " caused by undelivered seq " +
                                std::to_string(*e->cause));
      } else {
        if (e->sent_at != cause->second->deliver_at || e->deliver_at < cause->second->deliver_at) {
          fail("causality", "seq " + std::to_string(e->seq) + " precedes its cause");
        }
        if (e->deliver_at < e->sent_at + sim.latency().between(e->from, e->to)) {
          fail("latency", "seq " + std::to_string(e->seq) + " arrives faster than the link allows");
        }
        root.emplace(e->seq, root.at(*e->cause));
      }
    } else if (const auto* order = std::get_if<protocol::CustomerOrder>(&e->payload)) {
      root.emplace(e->seq, order->order_id);
    } else {
      fail("spontaneous", "seq " + std::to_string(e->seq) + " has no cause");
    }
    by_seq.emplace(e->seq, e);
    if (auto r = root.find(e->seq); r != root.end()) ++per_order[r->second];

    if (const auto* m = std::get_if<protocol::ShipGoodsRequest>(&e->payload)) {
      requested[m->request_id] = m->qty;
    } else if (const auto* m = std::get_if<protocol::ShipGoodsResponse>(&e->payload)) {
      if (const auto* a = std::get_if<protocol::Accept>(&m->verdict)) {
        auto q = requested.find(m->request_id);
        if (q == requested.end() || a->available < q->second) {
          fail("accept-capacity", m->request_id.str() + " accepted with " + std::to_string(a->available));
        }
      } else if (e->cause && std::holds_alternative<protocol::ShipGoodsRequest>(by_seq.at(*e->cause)->payload)) {
        ++first_declines;
      }
    } else if (const auto* m = std::get_if<protocol::POSubmit>(&e->payload)) {
      ++submits[m->po_id];
      if (auto r = root.find(e->seq); r != root.end()) order_pos[r->second].insert(m->po_id);
    } else if (const auto* m = std::get_if<protocol::POAck>(&e->payload)) {
      ++acks[m->po_id];
    } else if (const auto* m = std::get_if<protocol::GoodsDelivery>(&e->payload)) {
      ++deliveries[m->po_id];
    }
  }

  if (first_declines != submits.size()) {
    fail("decline-po", std::to_string(first_declines) + " first-round declines but " +
                           std::to_string(submits.size()) + " purchase orders");
  }
  for (const auto& [po, n] : submits) {
    const int want_submits = duplicates ? 2 : 1;
    if (n != want_submits) fail("po-ack", po.str() + " submitted " + std::to_string(n) + " times");
    if (acks[po] != n) fail("po-ack", po.str() + " has " + std::to_string(acks[po]) + " acks for " +
                                          std::to_string(n) + " submits");
    if (deliveries[po] != 1) fail("po-delivery", po.str() + " delivered " + std::to_string(deliveries[po]) + " times");
  }
  for (const auto& [po, n] : deliveries) {
    if (!submits.contains(po)) fail("po-delivery", po.str() + " delivered without a submit");
  }

  for (const auto& [order, count] : per_order) {
    const std::size_t rounds = order_pos.contains(order) ? order_pos.at(order).size() : 0;
    const std::uint64_t bound = order_event_bound(s.warehouses.size(), rounds, duplicates);
    if (count > bound) {
      fail("order-bound", order.str() + " needed " + std::to_string(count) + " events, bound " +
                              std::to_string(bound));
    }
  }
}

}  // namespace

bool CheckReport::has(std::string_view invariant) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.invariant == invariant; });
}

ConservationTotals conservation_totals(const scenario::World& world) {
  ConservationTotals t;
  for (const auto& entry : world.simulation().log().entries()) {
    if (const auto* row = std::get_if<inventory::HistoryRow>(&entry)) {
      if (row->op == inventory::OpKind::Initial) t.initial = checked_add(t.initial, row->delta);
    } else if (const auto* e = std::get_if<sim::Envelope>(&entry)) {
      if (const auto* m = std::get_if<protocol::GoodsDelivery>(&e->payload)) {
        t.manufacturer_deliveries = checked_add(t.manufacturer_deliveries, m->qty);
      } else if (const auto* m = std::get_if<protocol::GoodsShipped>(&e->payload)) {
        t.shipped_to_buyers = checked_add(t.shipped_to_buyers, m->qty);
      }
    }
  }
  for (const auto& [owner, ledger] : world.ledgers()) t.final_on_hand = checked_add(t.final_on_hand, ledger->total_on_hand());
  return t;
}

std::uint64_t order_event_bound(std::size_t warehouses, std::size_t replenishments, bool duplicates) {
  return 4 + 3 * warehouses + replenishments * (duplicates ? 6 : 4);
}

CheckReport check_run(const scenario::Scenario& s, const scenario::World& world) {
  CheckReport report;
  const Recorder fail{report};
  check_ledgers(world, fail);
  check_orders(s, world, fail);
  check_procurement(s, world, fail);
  check_messages(s, world, fail);
  return report;
}

}  // namespace vcsim::checks
