#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vcsim/core.hpp"

namespace vcsim::inventory {

enum class InventoryErrc { NonPositiveQuantity, Insufficient, NotReserved, Overflow };

std::string_view to_string(InventoryErrc e);

using InventoryError = Error<InventoryErrc>;

enum class OpKind { Initial, Restock, Reserve, Release, Ship };

std::string_view to_string(OpKind op);

struct StockRow {
  Quantity on_hand = 0;
  Quantity reserved = 0;

  Quantity available() const noexcept { return on_hand - reserved; }
  bool operator==(const StockRow&) const = default;
};

// One accepted operation. `delta` is signed against the column the operation
// moves: Initial/Restock add to on_hand, Reserve adds to reserved, Release
// subtracts from reserved, Ship subtracts from both.
struct HistoryRow {
  SimTime at;
  OpKind op = OpKind::Initial;
  Sku sku;
  Quantity delta = 0;

  bool operator==(const HistoryRow&) const = default;
};

// `INV <time> <op> <sku> <delta>`
std::string render(const HistoryRow& row);

struct StockLine {
  Sku sku;
  Quantity quantity = 0;
};

// Per-owner, per-SKU stock with reservations. Every mutating call either
// succeeds completely or throws and leaves the ledger untouched.
class Ledger {
 public:
  Ledger() = default;
  explicit Ledger(PartyId owner) : owner_(std::move(owner)) {}

  const PartyId& owner() const noexcept { return owner_; }

  void seed(const Sku& sku, Quantity qty, SimTime at);
  void restock(const Sku& sku, Quantity qty, SimTime at);
  // Restocks several lines as a single all-or-nothing step.
  void restock_all(std::span<const StockLine> lines, SimTime at);
  void reserve(const Sku& sku, Quantity qty, SimTime at);
  void release(const Sku& sku, Quantity qty, SimTime at);
  void ship(const Sku& sku, Quantity qty, SimTime at);

  // Unknown SKUs read as zero.
  Quantity available(const Sku& sku) const noexcept;
  Quantity on_hand(const Sku& sku) const noexcept;
  Quantity reserved(const Sku& sku) const noexcept;

  Quantity total_on_hand() const;
  Quantity total_reserved() const;

  const std::map<Sku, StockRow>& rows() const noexcept { return rows_; }
  const std::vector<HistoryRow>& history() const noexcept { return history_; }

  std::uint64_t state_hash() const;

  // Rebuilds stock rows from an operation history.
  static std::map<Sku, StockRow> replay(std::span<const HistoryRow> history);

 private:
  StockRow row(const Sku& sku) const noexcept;
  void apply(const HistoryRow& row, const StockRow& next);

  PartyId owner_;
  std::map<Sku, StockRow> rows_;
  std::vector<HistoryRow> history_;
};

}  // namespace vcsim::inventory
