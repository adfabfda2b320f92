#include "vcsim/agents.hpp"

#include <algorithm>

namespace vcsim::protocol {

namespace {

template <typename... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <typename... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(ProtocolErrc code, const std::string& detail) {
  throw ProtocolError(code, std::string(to_string(code)) + ": " + detail);
}

[[noreturn]] void unexpected(const PartyId& self, const sim::Envelope& in) {
  fail(ProtocolErrc::UnexpectedMessage, self.str() + " cannot handle " + std::string(variant_name(in.payload)));
}

const CatalogItem& catalog_item(const HandlerContext& ctx, const Sku& sku) {
  auto it = ctx.catalog.find(sku);
  if (it == ctx.catalog.end()) fail(ProtocolErrc::InvalidMessage, "sku " + sku.str() + " not in catalog");
  return it->second;
}

std::string order_note(const OrderId& id, OrderPhase phase) {
  return "order " + id.str() + " " + std::string(to_string(phase));
}

std::string po_header(const PoId& po, const PartyId& supplier, procurement::ProcurementState state) {
  return "PO " + po.str() + " " + supplier.str() + " " + std::string(procurement::to_string(state));
}

}  // namespace

std::string_view to_string(OrderPhase p) {
  switch (p) {
    case OrderPhase::AwaitingSourcing: return "AwaitingSourcing";
    case OrderPhase::AwaitingResponses: return "AwaitingResponses";
    case OrderPhase::AwaitingShipment: return "AwaitingShipment";
    case OrderPhase::AwaitingPayment: return "AwaitingPayment";
    case OrderPhase::Closed: return "Closed";
    case OrderPhase::Rejected: return "Rejected";
  }
  return "?";
}

RequestId request_id_for(const OrderId& order, const PartyId& warehouse) {
  return RequestId(order.str() + "@" + warehouse.str());
}

PoId po_id_for(const PartyId& warehouse, procurement::PlanId plan) {
  return PoId(warehouse.str() + ".PO" + std::to_string(plan.value));
}

std::optional<PartyId> select_warehouse(std::span<const AcceptOffer> accepts, Quantity qty,
                                        std::span<const PartyId> preference) {
  auto rank = [&](const PartyId& w) {
    auto it = std::find(preference.begin(), preference.end(), w);
    return static_cast<std::size_t>(it - preference.begin());
  };
  const AcceptOffer* best = nullptr;
  for (const auto& offer : accepts) {
    if (offer.available < qty) continue;
    if (best == nullptr || offer.available > best->available ||
        (offer.available == best->available && rank(offer.warehouse) < rank(best->warehouse))) {
      best = &offer;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->warehouse;
}

// ---------------------------------------------------------------------------
// Retailer

namespace {

void close_order(const OrderId& id, OpenOrder& order, SimTime now, sim::Reaction& out) {
  order.phase = OrderPhase::Closed;
  out.notes.push_back(order_note(id, order.phase));
  out.interactions.push_back({order.buyer, now, order.amount});
}

// Called once every warehouse in the current round has answered.
void decide(const RetailerState& state, const OrderId& id, OpenOrder& order, sim::Reaction& out) {
  const auto selected = select_warehouse(order.accepts, order.qty, state.known_warehouses);
  if (!selected && !order.backlogged.empty()) {
    order.pending = std::move(order.backlogged);
    order.backlogged.clear();
    ++order.round;
    return;
  }
  if (selected) {
    order.selected = *selected;
    out.outgoing.push_back({*selected, ShipConfirm{request_id_for(id, *selected), *selected}, std::nullopt});
    out.outgoing.push_back({order.buyer, OrderInvoice{id, order.amount}, std::nullopt});
  }
  for (const auto& offer : order.accepts) {
    if (selected && offer.warehouse == *selected) continue;
    out.outgoing.push_back({offer.warehouse, CancelReservation{request_id_for(id, offer.warehouse)}, std::nullopt});
  }
  if (selected) {
    order.phase = OrderPhase::AwaitingShipment;
  } else {
    order.phase = OrderPhase::Rejected;
    out.outgoing.push_back({order.buyer, OrderRejected{id, "no-capacity"}, std::nullopt});
  }
  out.notes.push_back(order_note(id, order.phase));
}

OpenOrder& find_order(RetailerState& state, const OrderId& id) {
  auto it = state.open_orders.find(id);
  if (it == state.open_orders.end()) fail(ProtocolErrc::UnknownOrder, id.str());
  return it->second;
}

}  // namespace

sim::Reaction retailer_handle_in_place(RetailerState& state, const sim::Envelope& in, const HandlerContext& ctx) {
  sim::Reaction out;
  const SimTime now = in.deliver_at;

  std::visit(
      overloaded{
          [&](const CustomerOrder& m) {
            if (state.open_orders.contains(m.order_id)) fail(ProtocolErrc::DuplicateOrder, m.order_id.str());
            const Money amount = checked_mul(m.qty, catalog_item(ctx, m.sku).unit_price);

            OpenOrder order;
            order.buyer = m.buyer;
            order.sku = m.sku;
            order.qty = m.qty;
            order.amount = amount;
            order.opened_at = now;
            order.phase = OrderPhase::AwaitingResponses;
            for (const auto& w : state.known_warehouses) {
              const RequestId rid = request_id_for(m.order_id, w);
              order.pending.insert(w);
              state.requests.insert_or_assign(rid, RequestRecord{m.order_id, w, 0, false});
              out.outgoing.push_back({w, ShipGoodsRequest{rid, m.order_id, m.sku, m.qty}, std::nullopt});
            }
            out.notes.push_back(order_note(m.order_id, order.phase));
            auto& stored = state.open_orders.emplace(m.order_id, std::move(order)).first->second;
            if (stored.pending.empty()) decide(state, m.order_id, stored, out);
          },
          [&](const ShipGoodsResponse& m) {
            auto rit = state.requests.find(m.request_id);
            if (rit == state.requests.end()) fail(ProtocolErrc::UnknownOrder, "response " + m.request_id.str());
            RequestRecord& rec = rit->second;
            if (rec.warehouse != in.from) {
              fail(ProtocolErrc::UnknownRequest, m.request_id.str() + " answered by " + in.from.str());
            }
            if (rec.settled) fail(ProtocolErrc::DuplicateResponse, m.request_id.str());
            OpenOrder& order = find_order(state, rec.order);

            const bool accepted = m.accepted();
            const bool final_answer = accepted || rec.answers >= 1;
            ++rec.answers;
            rec.settled = final_answer;

            const bool in_round = order.pending.contains(in.from);
            const bool early_reanswer = !in_round && order.backlogged.contains(in.from);
            if (order.phase == OrderPhase::AwaitingResponses && (in_round || early_reanswer)) {
              if (in_round) {
                order.pending.erase(in.from);
              } else {
                order.backlogged.erase(in.from);
              }
              if (accepted) {
                order.accepts.push_back({in.from, std::get<Accept>(m.verdict).available});
              } else if (!final_answer) {
                order.backlogged.insert(in.from);
              }
              if (order.pending.empty()) decide(state, rec.order, order, out);
            } else if (accepted) {
              // Re-answer after the order was already decided.
              out.outgoing.push_back({in.from, CancelReservation{m.request_id}, std::nullopt});
            }
          },
          [&](const GoodsShipped& m) {
            OpenOrder& order = find_order(state, m.order_id);
            if (order.phase != OrderPhase::AwaitingShipment || !order.selected || *order.selected != in.from) {
              fail(ProtocolErrc::WrongPhase, "GoodsShipped for " + m.order_id.str());
            }
            if (m.sku != order.sku || m.qty != order.qty) {
              fail(ProtocolErrc::InvalidMessage, "shipment does not match order " + m.order_id.str());
            }
            if (order.paid) {
              close_order(m.order_id, order, now, out);
            } else {
              order.phase = OrderPhase::AwaitingPayment;
              out.notes.push_back(order_note(m.order_id, order.phase));
            }
          },
          [&](const Payment& m) {
            OpenOrder& order = find_order(state, m.order_id);
            if (in.from != order.buyer) fail(ProtocolErrc::WrongPhase, "payment from non-buyer " + in.from.str());
            if (m.amount != order.amount) {
              fail(ProtocolErrc::PaymentMismatch, m.order_id.str() + " paid " + std::to_string(m.amount) +
                                                      " expected " + std::to_string(order.amount));
            }
            if (order.phase == OrderPhase::AwaitingPayment) {
              close_order(m.order_id, order, now, out);
            } else if (order.phase == OrderPhase::AwaitingShipment && !order.paid) {
              // Settled on shipment.
              order.paid = true;
            } else {
              fail(ProtocolErrc::WrongPhase, "Payment for " + m.order_id.str());
            }
          },
          [&](const auto&) { unexpected(state.self, in); },
      },
      in.payload);
  return out;
}

std::pair<RetailerState, sim::Reaction> retailer_handle(RetailerState state, const sim::Envelope& incoming,
                                                        const HandlerContext& ctx) {
  sim::Reaction reaction = retailer_handle_in_place(state, incoming, ctx);
  return {std::move(state), std::move(reaction)};
}

// ---------------------------------------------------------------------------
// Warehouse

namespace {

WarehouseRequest& find_request(WarehouseState& state, const RequestId& id, RequestStatus expected) {
  auto it = state.requests.find(id);
  if (it == state.requests.end() || it->second.status != expected) fail(ProtocolErrc::UnknownRequest, id.str());
  return it->second;
}

// Answers a request from current stock. Returns the response to send.
ShipGoodsResponse answer(WarehouseState& state, const RequestId& id, WarehouseRequest& req, SimTime now) {
  const Quantity available = state.ledger.available(req.sku);
  if (available >= req.qty) {
    state.ledger.reserve(req.sku, req.qty, now);
    req.status = RequestStatus::Reserved;
    return ShipGoodsResponse{id, Accept{available}};
  }
  return ShipGoodsResponse{id, Decline{}};
}

}  // namespace

sim::Reaction warehouse_handle_in_place(WarehouseState& state, const sim::Envelope& in, const HandlerContext& ctx) {
  sim::Reaction out;
  const SimTime now = in.deliver_at;

  std::visit(
      overloaded{
          [&](const ShipGoodsRequest& m) {
            if (state.requests.contains(m.request_id)) fail(ProtocolErrc::DuplicateRequest, m.request_id.str());
            const Money unit_cost = catalog_item(ctx, m.sku).unit_cost;
            WarehouseRequest req{m.order_id, in.from, m.sku, m.qty, RequestStatus::Backlogged};
            ShipGoodsResponse response = answer(state, m.request_id, req, now);
            if (!response.accepted()) {
              const Quantity shortfall = m.qty - state.ledger.available(m.sku);
              const Quantity po_qty = std::max(state.reorder_qty, shortfall);
              const auto& plan = state.procurement.create_plan(state.self, {{m.sku, po_qty, unit_cost}}, now);
              const PoId po = po_id_for(state.self, plan.id);
              out.notes.push_back(po_header(po, state.manufacturer, procurement::ProcurementState::Planned));
              state.procurement.formulate_expenditure(plan.id);
              const auto& doc = state.procurement.transmit_document(plan.id, state.manufacturer, now);
              for (auto& line : procurement::render_document(doc, po.str())) out.notes.push_back(std::move(line));
              state.pending_pos.emplace(po, PendingPo{m.sku, po_qty, {m.request_id}, plan.id, doc.id, std::nullopt});
              out.outgoing.push_back({in.from, std::move(response), std::nullopt});
              out.outgoing.push_back({state.manufacturer, POSubmit{po, m.sku, po_qty}, std::nullopt});
            } else {
              out.outgoing.push_back({in.from, std::move(response), std::nullopt});
            }
            state.requests.emplace(m.request_id, std::move(req));
          },
          [&](const ShipConfirm& m) {
            WarehouseRequest& req = find_request(state, m.request_id, RequestStatus::Reserved);
            state.ledger.ship(req.sku, req.qty, now);
            req.status = RequestStatus::Shipped;
            out.outgoing.push_back({req.retailer, GoodsShipped{req.order, req.sku, req.qty}, std::nullopt});
          },
          [&](const CancelReservation& m) {
            WarehouseRequest& req = find_request(state, m.request_id, RequestStatus::Reserved);
            state.ledger.release(req.sku, req.qty, now);
            req.status = RequestStatus::Released;
          },
          [&](const POAck& m) {
            if (auto it = state.pending_pos.find(m.po_id); it != state.pending_pos.end()) {
              it->second.eta = m.eta;
            } else if (!state.completed_pos.contains(m.po_id)) {
              fail(ProtocolErrc::UnknownPo, m.po_id.str());
            }
          },
          [&](const GoodsDelivery& m) {
            auto it = state.pending_pos.find(m.po_id);
            if (it == state.pending_pos.end()) fail(ProtocolErrc::UnknownPo, m.po_id.str());
            const PendingPo po = it->second;
            if (m.sku != po.sku) fail(ProtocolErrc::InvalidMessage, "delivery sku mismatch for " + m.po_id.str());

            auto& store = state.procurement;
            const auto& receipt =
                store.receive_goods(po.document, {{m.sku, m.qty}}, procurement::Inspection::Passed, now, state.ledger);
            out.notes.push_back(po_header(m.po_id, state.manufacturer, procurement::ProcurementState::Received));
            const auto& warrant = store.issue_warrant(receipt.id, state.self, now);
            out.notes.push_back(po_header(m.po_id, state.manufacturer, procurement::ProcurementState::WarrantIssued));
            store.book_ledger(warrant.id, "INV-" + m.po_id.str(), now);
            out.notes.push_back(po_header(m.po_id, state.manufacturer, procurement::ProcurementState::Booked));

            state.pending_pos.erase(it);
            state.completed_pos.insert(m.po_id);

            // Each backlogged request is answered exactly once more, in FIFO order.
            for (const auto& rid : po.backlog) {
              WarehouseRequest& req = state.requests.at(rid);
              if (req.status != RequestStatus::Backlogged) continue;
              ShipGoodsResponse response = answer(state, rid, req, now);
              if (!response.accepted()) req.status = RequestStatus::Declined;
              out.outgoing.push_back({req.retailer, std::move(response), std::nullopt});
            }
          },
          [&](const auto&) { unexpected(state.self, in); },
      },
      in.payload);
  return out;
}

std::pair<WarehouseState, sim::Reaction> warehouse_handle(WarehouseState state, const sim::Envelope& incoming,
                                                          const HandlerContext& ctx) {
  sim::Reaction reaction = warehouse_handle_in_place(state, incoming, ctx);
  return {std::move(state), std::move(reaction)};
}

// ---------------------------------------------------------------------------
// Manufacturer

sim::Reaction manufacturer_handle_in_place(ManufacturerState& state, const sim::Envelope& in,
                                           const HandlerContext& ctx) {
  sim::Reaction out;
  const auto* submit = std::get_if<POSubmit>(&in.payload);
  if (submit == nullptr) unexpected(state.self, in);

  if (auto it = state.seen_pos.find(submit->po_id); it != state.seen_pos.end()) {
    out.outgoing.push_back({in.from, POAck{submit->po_id, it->second}, std::nullopt});
    return out;
  }
  // Goods cannot arrive before the link latency allows.
  const std::uint64_t lead = std::max(state.production_delay, ctx.latency(state.self, in.from));
  const SimTime eta = in.deliver_at + lead;
  state.seen_pos.emplace(submit->po_id, eta);
  out.outgoing.push_back({in.from, POAck{submit->po_id, eta}, std::nullopt});
  out.outgoing.push_back({in.from, GoodsDelivery{submit->po_id, submit->sku, submit->qty}, eta});
  return out;
}

std::pair<ManufacturerState, sim::Reaction> manufacturer_handle(ManufacturerState state,
                                                                const sim::Envelope& incoming,
                                                                const HandlerContext& ctx) {
  sim::Reaction reaction = manufacturer_handle_in_place(state, incoming, ctx);
  return {std::move(state), std::move(reaction)};
}

// ---------------------------------------------------------------------------
// Customer

sim::Reaction customer_handle_in_place(CustomerState& state, const sim::Envelope& in, const HandlerContext&) {
  sim::Reaction out;
  std::visit(overloaded{
                 [&](const OrderInvoice& m) {
                   state.invoices.insert_or_assign(m.order_id, m.amount);
                   out.outgoing.push_back({in.from, Payment{m.order_id, m.amount}, std::nullopt});
                 },
                 [&](const OrderRejected& m) { state.rejected.insert(m.order_id); },
                 [&](const auto&) { unexpected(state.self, in); },
             },
             in.payload);
  return out;
}

std::pair<CustomerState, sim::Reaction> customer_handle(CustomerState state, const sim::Envelope& incoming,
                                                        const HandlerContext& ctx) {
  sim::Reaction reaction = customer_handle_in_place(state, incoming, ctx);
  return {std::move(state), std::move(reaction)};
}

}  // namespace vcsim::protocol
