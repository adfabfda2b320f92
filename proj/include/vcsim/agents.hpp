#pragma once

// Per-role protocol state machines. Each handler comes in two forms: an
// in-place form used by the engine, and a pure form taking the state by value
// and returning the successor state with the reaction. Neither touches
// anything beyond its arguments.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vcsim/core.hpp"
#include "vcsim/envelope.hpp"
#include "vcsim/inventory.hpp"
#include "vcsim/messages.hpp"
#include "vcsim/party_model.hpp"
#include "vcsim/procurement.hpp"

namespace vcsim::protocol {

struct HandlerContext {
  const Catalog& catalog;
  sim::LatencyFn latency;
};

// ---------------------------------------------------------------------------
// Retailer

enum class OrderPhase { AwaitingSourcing, AwaitingResponses, AwaitingShipment, AwaitingPayment, Closed, Rejected };

std::string_view to_string(OrderPhase p);

struct AcceptOffer {
  PartyId warehouse;
  Quantity available = 0;
};

struct OpenOrder {
  PartyId buyer;
  Sku sku;
  Quantity qty = 0;
  Money amount = 0;
  OrderPhase phase = OrderPhase::AwaitingSourcing;
  SimTime opened_at;
  // Warehouses whose answer for the current round is still outstanding.
  std::set<PartyId> pending;
  std::vector<AcceptOffer> accepts;
  // Warehouses that declined provisionally and will answer again after their
  // replenishment arrives.
  std::set<PartyId> backlogged;
  int round = 1;
  std::optional<PartyId> selected;
  bool paid = false;
};

struct RequestRecord {
  OrderId order;
  PartyId warehouse;
  int answers = 0;
  bool settled = false;  // an Accept or a second Decline has been seen
};

struct RetailerState {
  PartyId self;
  std::vector<PartyId> known_warehouses;
  std::map<OrderId, OpenOrder> open_orders;
  std::map<RequestId, RequestRecord> requests;
};

RequestId request_id_for(const OrderId& order, const PartyId& warehouse);

// Among accepts with available >= qty pick the largest availability; ties go
// to the warehouse listed first in `preference`.
std::optional<PartyId> select_warehouse(std::span<const AcceptOffer> accepts, Quantity qty,
                                        std::span<const PartyId> preference);

sim::Reaction retailer_handle_in_place(RetailerState& state, const sim::Envelope& incoming, const HandlerContext& ctx);

std::pair<RetailerState, sim::Reaction> retailer_handle(RetailerState state, const sim::Envelope& incoming,
                                                        const HandlerContext& ctx);

// ---------------------------------------------------------------------------
// Warehouse

enum class RequestStatus { Reserved, Backlogged, Shipped, Released, Declined };

struct WarehouseRequest {
  OrderId order;
  PartyId retailer;
  Sku sku;
  Quantity qty = 0;
  RequestStatus status = RequestStatus::Reserved;
};

struct PendingPo {
  Sku sku;
  Quantity qty = 0;
  std::deque<RequestId> backlog;
  procurement::PlanId plan;
  procurement::DocumentId document;
  std::optional<SimTime> eta;
};

struct WarehouseState {
  WarehouseState(PartyId self, PartyId manufacturer, Quantity reorder_qty, const party::Registry& registry)
      : self(self), ledger(self), manufacturer(std::move(manufacturer)), reorder_qty(reorder_qty),
        procurement(registry) {}

  PartyId self;
  inventory::Ledger ledger;
  PartyId manufacturer;
  Quantity reorder_qty = 1;
  std::map<PoId, PendingPo> pending_pos;
  std::set<PoId> completed_pos;
  std::map<RequestId, WarehouseRequest> requests;
  procurement::ProcurementStore procurement;
};

PoId po_id_for(const PartyId& warehouse, procurement::PlanId plan);

sim::Reaction warehouse_handle_in_place(WarehouseState& state, const sim::Envelope& incoming,
                                        const HandlerContext& ctx);

std::pair<WarehouseState, sim::Reaction> warehouse_handle(WarehouseState state, const sim::Envelope& incoming,
                                                          const HandlerContext& ctx);

// ---------------------------------------------------------------------------
// Manufacturer

struct ManufacturerState {
  PartyId self;
  std::uint64_t production_delay = 1;
  std::map<PoId, SimTime> seen_pos;  // po id -> promised eta
};

sim::Reaction manufacturer_handle_in_place(ManufacturerState& state, const sim::Envelope& incoming,
                                           const HandlerContext& ctx);

std::pair<ManufacturerState, sim::Reaction> manufacturer_handle(ManufacturerState state,
                                                                const sim::Envelope& incoming,
                                                                const HandlerContext& ctx);

// ---------------------------------------------------------------------------
// Customer: pays each invoice in full and records rejections.

struct CustomerState {
  PartyId self;
  std::map<OrderId, Money> invoices;
  std::set<OrderId> rejected;
};

sim::Reaction customer_handle_in_place(CustomerState& state, const sim::Envelope& incoming, const HandlerContext& ctx);

std::pair<CustomerState, sim::Reaction> customer_handle(CustomerState state, const sim::Envelope& incoming,
                                                        const HandlerContext& ctx);

}  // namespace vcsim::protocol
