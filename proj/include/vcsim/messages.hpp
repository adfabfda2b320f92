#pragma once

// Protocol vocabulary exchanged between customers, the retailer, warehouses
// and manufacturers.

#include <map>
#include <string>
#include <string_view>
#include <variant>

#include "vcsim/core.hpp"

namespace vcsim::protocol {

using OrderId = Token<struct OrderIdTag>;
using RequestId = Token<struct RequestIdTag>;
using PoId = Token<struct PoIdTag>;

struct CustomerOrder {
  static constexpr std::string_view kName = "CustomerOrder";
  OrderId order_id;
  PartyId buyer;
  Sku sku;
  Quantity qty = 0;
};

struct OrderInvoice {
  static constexpr std::string_view kName = "OrderInvoice";
  OrderId order_id;
  Money amount = 0;
};

struct Payment {
  static constexpr std::string_view kName = "Payment";
  OrderId order_id;
  Money amount = 0;
};

struct ShipGoodsRequest {
  static constexpr std::string_view kName = "ShipGoodsRequest";
  RequestId request_id;
  OrderId order_id;
  Sku sku;
  Quantity qty = 0;
};

struct Accept {
  Quantity available = 0;
};

struct Decline {};

struct ShipGoodsResponse {
  static constexpr std::string_view kName = "ShipGoodsResponse";
  RequestId request_id;
  std::variant<Accept, Decline> verdict;

  bool accepted() const noexcept { return std::holds_alternative<Accept>(verdict); }
};

struct ShipConfirm {
  static constexpr std::string_view kName = "ShipConfirm";
  RequestId request_id;
  PartyId warehouse;
};

struct GoodsShipped {
  static constexpr std::string_view kName = "GoodsShipped";
  OrderId order_id;
  Sku sku;
  Quantity qty = 0;
};

struct POSubmit {
  static constexpr std::string_view kName = "POSubmit";
  PoId po_id;
  Sku sku;
  Quantity qty = 0;
};

struct POAck {
  static constexpr std::string_view kName = "POAck";
  PoId po_id;
  SimTime eta;
};

struct GoodsDelivery {
  static constexpr std::string_view kName = "GoodsDelivery";
  PoId po_id;
  Sku sku;
  Quantity qty = 0;
};

struct OrderRejected {
  static constexpr std::string_view kName = "OrderRejected";
  OrderId order_id;
  std::string reason;
};

// Bookkeeping: frees a reservation held by a warehouse whose acceptance was
// not selected.
struct CancelReservation {
  static constexpr std::string_view kName = "CancelReservation";
  RequestId request_id;
};

using Message = std::variant<CustomerOrder, OrderInvoice, Payment, ShipGoodsRequest, ShipGoodsResponse, ShipConfirm,
                             GoodsShipped, POSubmit, POAck, GoodsDelivery, OrderRejected, CancelReservation>;

std::string_view variant_name(const Message& m);

// `<variant> <fields...>` with fields in declaration order.
std::string render(const Message& m);

enum class ProtocolErrc {
  InvalidMessage,
  UnknownOrder,
  DuplicateOrder,
  DuplicateResponse,
  UnknownRequest,
  DuplicateRequest,
  UnknownPo,
  UnexpectedMessage,
  PaymentMismatch,
  WrongPhase,
};

std::string_view to_string(ProtocolErrc e);

using ProtocolError = Error<ProtocolErrc>;

// Throws InvalidMessage when an id is empty or not a log-safe token, or a
// goods-bearing variant carries qty < 1.
void validate(const Message& m);

struct CatalogItem {
  Money unit_price = 0;
  Money unit_cost = 0;
};

using Catalog = std::map<Sku, CatalogItem>;

}  // namespace vcsim::protocol
