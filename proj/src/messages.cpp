#include "vcsim/messages.hpp"

#include <sstream>

namespace vcsim::protocol {

namespace {

template <typename... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <typename... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void invalid(std::string_view variant, const std::string& detail) {
  throw ProtocolError(ProtocolErrc::InvalidMessage, "InvalidMessage: " + std::string(variant) + " " + detail);
}

template <typename Tag>
void require_token(std::string_view variant, const char* field, const Token<Tag>& t) {
  if (!is_valid_token(t.str())) invalid(variant, std::string(field) + " '" + t.str() + "'");
}

void require_qty(std::string_view variant, Quantity qty) {
  if (qty < 1) invalid(variant, "qty " + std::to_string(qty));
}

}  // namespace

std::string_view variant_name(const Message& m) {
  return std::visit([](const auto& v) { return std::decay_t<decltype(v)>::kName; }, m);
}

std::string render(const Message& m) {
  std::ostringstream os;
  os << variant_name(m);
  std::visit(overloaded{
                 [&](const CustomerOrder& v) { os << ' ' << v.order_id << ' ' << v.buyer << ' ' << v.sku << ' ' << v.qty; },
                 [&](const OrderInvoice& v) { os << ' ' << v.order_id << ' ' << v.amount; },
                 [&](const Payment& v) { os << ' ' << v.order_id << ' ' << v.amount; },
                 [&](const ShipGoodsRequest& v) {
                   os << ' ' << v.request_id << ' ' << v.order_id << ' ' << v.sku << ' ' << v.qty;
                 },
                 [&](const ShipGoodsResponse& v) {
                   os << ' ' << v.request_id;
                   if (const auto* a = std::get_if<Accept>(&v.verdict)) {
                     os << " Accept " << a->available;
                   } else {
                     os << " Decline";
                   }
                 },
                 [&](const ShipConfirm& v) { os << ' ' << v.request_id << ' ' << v.warehouse; },
                 [&](const GoodsShipped& v) { os << ' ' << v.order_id << ' ' << v.sku << ' ' << v.qty; },
                 [&](const POSubmit& v) { os << ' ' << v.po_id << ' ' << v.sku << ' ' << v.qty; },
                 [&](const POAck& v) { os << ' ' << v.po_id << ' ' << v.eta.ticks; },
                 [&](const GoodsDelivery& v) { os << ' ' << v.po_id << ' ' << v.sku << ' ' << v.qty; },
                 [&](const OrderRejected& v) { os << ' ' << v.order_id << ' ' << v.reason; },
                 [&](const CancelReservation& v) { os << ' ' << v.request_id; },
             },
             m);
  return os.str();
}

void validate(const Message& m) {
  const std::string_view name = variant_name(m);
  std::visit(overloaded{
                 [&](const CustomerOrder& v) {
                   require_token(name, "order_id", v.order_id);
                   require_token(name, "buyer", v.buyer);
                   require_token(name, "sku", v.sku);
                   require_qty(name, v.qty);
                 },
                 [&](const OrderInvoice& v) { require_token(name, "order_id", v.order_id); },
                 [&](const Payment& v) { require_token(name, "order_id", v.order_id); },
                 [&](const ShipGoodsRequest& v) {
                   require_token(name, "request_id", v.request_id);
                   require_token(name, "order_id", v.order_id);
                   require_token(name, "sku", v.sku);
                   require_qty(name, v.qty);
                 },
                 [&](const ShipGoodsResponse& v) {
                   require_token(name, "request_id", v.request_id);
                   if (const auto* a = std::get_if<Accept>(&v.verdict); a && a->available < 0) {
                     invalid(name, "negative availability");
                   }
                 },
                 [&](const ShipConfirm& v) {
                   require_token(name, "request_id", v.request_id);
                   require_token(name, "warehouse", v.warehouse);
                 },
                 [&](const GoodsShipped& v) {
                   require_token(name, "order_id", v.order_id);
                   require_token(name, "sku", v.sku);
                   require_qty(name, v.qty);
                 },
                 [&](const POSubmit& v) {
                   require_token(name, "po_id", v.po_id);
                   require_token(name, "sku", v.sku);
                   require_qty(name, v.qty);
                 },
                 [&](const POAck& v) { require_token(name, "po_id", v.po_id); },
                 [&](const GoodsDelivery& v) {
                   require_token(name, "po_id", v.po_id);
                   require_token(name, "sku", v.sku);
                   require_qty(name, v.qty);
                 },
                 [&](const OrderRejected& v) {
                   require_token(name, "order_id", v.order_id);
                   if (!is_valid_token(v.reason)) invalid(name, "reason '" + v.reason + "'");
                 },
                 [&](const CancelReservation& v) { require_token(name, "request_id", v.request_id); },
             },
             m);
}

std::string_view to_string(ProtocolErrc e) {
  switch (e) {
    case ProtocolErrc::InvalidMessage: return "InvalidMessage";
    case ProtocolErrc::UnknownOrder: return "UnknownOrder";
    case ProtocolErrc::DuplicateOrder: return "DuplicateOrder";
    case ProtocolErrc::DuplicateResponse: return "DuplicateResponse";
    case ProtocolErrc::UnknownRequest: return "UnknownRequest";
    case ProtocolErrc::DuplicateRequest: return "DuplicateRequest";
    case ProtocolErrc::UnknownPo: return "UnknownPo";
    case ProtocolErrc::UnexpectedMessage: return "UnexpectedMessage";
    case ProtocolErrc::PaymentMismatch: return "PaymentMismatch";
    case ProtocolErrc::WrongPhase: return "WrongPhase";
  }
  return "?";
}

}  // namespace vcsim::protocol
