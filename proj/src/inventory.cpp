#include "vcsim/inventory.hpp"

namespace vcsim::inventory {

std::string_view to_string(InventoryErrc e) {
  switch (e) {
    case InventoryErrc::NonPositiveQuantity: return "NonPositiveQuantity";
    case InventoryErrc::Insufficient: return "Insufficient";
    case InventoryErrc::NotReserved: return "NotReserved";
    case InventoryErrc::Overflow: return "Overflow";
  }
  return "?";
}

std::string_view to_string(OpKind op) {
  switch (op) {
    case OpKind::Initial: return "initial";
    case OpKind::Restock: return "restock";
    case OpKind::Reserve: return "reserve";
    case OpKind::Release: return "release";
    case OpKind::Ship: return "ship";
  }
  return "?";
}

std::string render(const HistoryRow& row) {
  return "INV " + std::to_string(row.at.ticks) + " " + std::string(to_string(row.op)) + " " + row.sku.str() + " " +
         std::to_string(row.delta);
}

namespace {

[[noreturn]] void fail(InventoryErrc code, const std::string& detail) {
  throw InventoryError(code, std::string(to_string(code)) + ": " + detail);
}

void require_positive(Quantity qty, const Sku& sku) {
  if (qty < 1) fail(InventoryErrc::NonPositiveQuantity, sku.str() + " qty " + std::to_string(qty));
}

Quantity add_stock(Quantity a, Quantity b, const Sku& sku) {
  try {
    return checked_add(a, b);
  } catch (const ArithmeticOverflow&) {
    fail(InventoryErrc::Overflow, "on_hand of " + sku.str());
  }
}

}  // namespace

StockRow Ledger::row(const Sku& sku) const noexcept {
  auto it = rows_.find(sku);
  return it == rows_.end() ? StockRow{} : it->second;
}

void Ledger::apply(const HistoryRow& entry, const StockRow& next) {
  history_.reserve(history_.size() + 1);
  rows_[entry.sku] = next;
  history_.push_back(entry);
}

void Ledger::seed(const Sku& sku, Quantity qty, SimTime at) {
  require_positive(qty, sku);
  StockRow next = row(sku);
  next.on_hand = add_stock(next.on_hand, qty, sku);
  apply({at, OpKind::Initial, sku, qty}, next);
}

void Ledger::restock(const Sku& sku, Quantity qty, SimTime at) {
  require_positive(qty, sku);
  StockRow next = row(sku);
  next.on_hand = add_stock(next.on_hand, qty, sku);
  apply({at, OpKind::Restock, sku, qty}, next);
}

void Ledger::restock_all(std::span<const StockLine> lines, SimTime at) {
  // Validate every line against the running totals before touching state.
  std::map<Sku, StockRow> staged;
  for (const auto& line : lines) {
    require_positive(line.quantity, line.sku);
    auto [it, inserted] = staged.try_emplace(line.sku, row(line.sku));
    it->second.on_hand = add_stock(it->second.on_hand, line.quantity, line.sku);
  }
  history_.reserve(history_.size() + lines.size());
  for (const auto& [sku, next] : staged) rows_.try_emplace(sku);
  for (const auto& [sku, next] : staged) rows_.at(sku) = next;
  for (const auto& line : lines) history_.push_back({at, OpKind::Restock, line.sku, line.quantity});
}

void Ledger::reserve(const Sku& sku, Quantity qty, SimTime at) {
  require_positive(qty, sku);
  StockRow next = row(sku);
  if (next.available() < qty) {
    fail(InventoryErrc::Insufficient, sku.str() + " available " + std::to_string(next.available()) + " < " +
                                          std::to_string(qty));
  }
  next.reserved += qty;
  apply({at, OpKind::Reserve, sku, qty}, next);
}

void Ledger::release(const Sku& sku, Quantity qty, SimTime at) {
  require_positive(qty, sku);
  StockRow next = row(sku);
  if (next.reserved < qty) fail(InventoryErrc::NotReserved, sku.str() + " reserved " + std::to_string(next.reserved));
  next.reserved -= qty;
  apply({at, OpKind::Release, sku, -qty}, next);
}

void Ledger::ship(const Sku& sku, Quantity qty, SimTime at) {
  require_positive(qty, sku);
  StockRow next = row(sku);
  if (next.reserved < qty) fail(InventoryErrc::NotReserved, sku.str() + " reserved " + std::to_string(next.reserved));
  next.reserved -= qty;
  next.on_hand -= qty;
  apply({at, OpKind::Ship, sku, -qty}, next);
}

Quantity Ledger::available(const Sku& sku) const noexcept { return row(sku).available(); }

Quantity Ledger::on_hand(const Sku& sku) const noexcept { return row(sku).on_hand; }

Quantity Ledger::reserved(const Sku& sku) const noexcept { return row(sku).reserved; }

Quantity Ledger::total_on_hand() const {
  Quantity total = 0;
  for (const auto& [sku, r] : rows_) total = checked_add(total, r.on_hand);
  return total;
}

Quantity Ledger::total_reserved() const {
  Quantity total = 0;
  for (const auto& [sku, r] : rows_) total = checked_add(total, r.reserved);
  return total;
}

std::uint64_t Ledger::state_hash() const {
  Fnv1a h;
  h.add(owner_.str());
  for (const auto& [sku, r] : rows_) {
    h.add(sku.str());
    h.add(r.on_hand);
    h.add(r.reserved);
  }
  h.add(static_cast<std::uint64_t>(history_.size()));
  for (const auto& entry : history_) h.add(render(entry));
  return h.value();
}

std::map<Sku, StockRow> Ledger::replay(std::span<const HistoryRow> history) {
  std::map<Sku, StockRow> rows;
  for (const auto& entry : history) {
    auto& r = rows[entry.sku];
    switch (entry.op) {
      case OpKind::Initial:
      case OpKind::Restock: r.on_hand += entry.delta; break;
      case OpKind::Reserve:
      case OpKind::Release: r.reserved += entry.delta; break;
      case OpKind::Ship:
        r.on_hand += entry.delta;
        r.reserved += entry.delta;
        break;
    }
  }
  return rows;
}

}  // namespace vcsim::inventory
