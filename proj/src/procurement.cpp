#include "vcsim/procurement.hpp"

#include <set>

namespace vcsim::procurement {

std::string_view to_string(ProcurementState s) {
  switch (s) {
    case ProcurementState::Planned: return "Planned";
    case ProcurementState::Transmitted: return "Transmitted";
    case ProcurementState::Received: return "Received";
    case ProcurementState::WarrantIssued: return "WarrantIssued";
    case ProcurementState::Booked: return "Booked";
  }
  return "?";
}

std::string_view to_string(ProcurementErrc e) {
  switch (e) {
    case ProcurementErrc::EmptyPlan: return "EmptyPlan";
    case ProcurementErrc::DuplicateSku: return "DuplicateSku";
    case ProcurementErrc::NonPositiveQuantity: return "NonPositiveQuantity";
    case ProcurementErrc::NegativeCost: return "NegativeCost";
    case ProcurementErrc::UnknownPlan: return "UnknownPlan";
    case ProcurementErrc::UnknownDocument: return "UnknownDocument";
    case ProcurementErrc::UnknownReceipt: return "UnknownReceipt";
    case ProcurementErrc::UnknownWarrant: return "UnknownWarrant";
    case ProcurementErrc::UnknownParty: return "UnknownParty";
    case ProcurementErrc::WrongState: return "WrongState";
    case ProcurementErrc::NotASupplier: return "NotASupplier";
    case ProcurementErrc::UnknownSku: return "UnknownSku";
    case ProcurementErrc::OverDelivery: return "OverDelivery";
    case ProcurementErrc::InspectionFailed: return "InspectionFailed";
    case ProcurementErrc::DuplicateWarrant: return "DuplicateWarrant";
    case ProcurementErrc::Overflow: return "Overflow";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(ProcurementErrc code, const std::string& detail) {
  throw ProcurementError(code, std::string(to_string(code)) + ": " + detail);
}

void require_state(const PurchaseDocument& doc, ProcurementState expected) {
  if (doc.state != expected) {
    fail(ProcurementErrc::WrongState, "document " + std::to_string(doc.id.value) + " is " +
                                          std::string(to_string(doc.state)) + ", expected " +
                                          std::string(to_string(expected)));
  }
}

const PlanLine* find_line(const std::vector<PlanLine>& lines, const Sku& sku) {
  for (const auto& line : lines) {
    if (line.sku == sku) return &line;
  }
  return nullptr;
}

}  // namespace

Money line_total(const std::vector<PlanLine>& lines) {
  Money total = 0;
  for (const auto& line : lines) total = checked_add(total, checked_mul(line.quantity, line.unit_cost));
  return total;
}

void ProcurementStore::record(PlanId plan, ProcurementState state, SimTime at) noexcept {
  // Callers reserve capacity first, so this cannot throw.
  transitions_.push_back({plan, state, at});
}

const PurchasePlan& ProcurementStore::create_plan(const PartyId& requested_by, std::vector<PlanLine> lines,
                                                  SimTime at) {
  if (lines.empty()) fail(ProcurementErrc::EmptyPlan, "plan has no lines");
  std::set<Sku> seen;
  for (const auto& line : lines) {
    if (line.quantity < 1) fail(ProcurementErrc::NonPositiveQuantity, line.sku.str());
    if (line.unit_cost < 0) fail(ProcurementErrc::NegativeCost, line.sku.str());
    if (!seen.insert(line.sku).second) fail(ProcurementErrc::DuplicateSku, line.sku.str());
  }
  if (!registry_->contains(requested_by)) fail(ProcurementErrc::UnknownParty, requested_by.str());

  const PlanId id{next_plan_};
  transitions_.reserve(transitions_.size() + 1);
  auto [it, inserted] = plans_.emplace(id, PurchasePlan{id, std::move(lines), requested_by, at, std::nullopt});
  ++next_plan_;
  record(id, ProcurementState::Planned, at);
  return it->second;
}

const Expenditure& ProcurementStore::formulate_expenditure(PlanId plan_id) {
  if (auto it = expenditures_.find(plan_id); it != expenditures_.end()) return it->second;
  const auto& p = plan(plan_id);
  Money total = 0;
  try {
    total = line_total(p.lines);
  } catch (const ArithmeticOverflow&) {
    fail(ProcurementErrc::Overflow, "expenditure of plan " + std::to_string(plan_id.value));
  }
  return expenditures_.emplace(plan_id, Expenditure{plan_id, total}).first->second;
}

const PurchaseDocument& ProcurementStore::transmit_document(PlanId plan_id, const PartyId& supplier, SimTime at) {
  auto it = plans_.find(plan_id);
  if (it == plans_.end()) fail(ProcurementErrc::UnknownPlan, std::to_string(plan_id.value));
  PurchasePlan& p = it->second;
  if (p.document) {
    fail(ProcurementErrc::WrongState, "plan " + std::to_string(plan_id.value) + " already transmitted");
  }
  if (!registry_->contains(supplier) ||
      !registry_->find_link(supplier, p.requested_by, party::RelationshipType::SupplierTo, at)) {
    fail(ProcurementErrc::NotASupplier, supplier.str() + " does not supply " + p.requested_by.str());
  }

  const DocumentId id{next_document_};
  transitions_.reserve(transitions_.size() + 1);
  auto [doc_it, inserted] =
      documents_.emplace(id, PurchaseDocument{id, plan_id, supplier, p.lines, ProcurementState::Transmitted});
  ++next_document_;
  p.document = id;
  record(plan_id, ProcurementState::Transmitted, at);
  return doc_it->second;
}

const GoodsReceipt& ProcurementStore::receive_goods(DocumentId document_id, std::vector<ReceivedLine> received,
                                                    Inspection inspection, SimTime at, inventory::Ledger& warehouse) {
  PurchaseDocument& doc = mutable_document(document_id);
  require_state(doc, ProcurementState::Transmitted);

  std::map<Sku, Quantity> per_sku;
  for (const auto& line : received) {
    if (line.quantity < 1) fail(ProcurementErrc::NonPositiveQuantity, line.sku.str());
    const PlanLine* ordered = find_line(doc.lines, line.sku);
    if (ordered == nullptr) fail(ProcurementErrc::UnknownSku, line.sku.str());
    Quantity& total = per_sku[line.sku];
    if (line.quantity > ordered->quantity - total) {
      fail(ProcurementErrc::OverDelivery, line.sku.str() + " received more than " +
                                              std::to_string(ordered->quantity));
    }
    total += line.quantity;
  }

  const ReceiptId id{next_receipt_};
  transitions_.reserve(transitions_.size() + 1);
  auto [it, inserted] = receipts_.emplace(id, GoodsReceipt{id, document_id, received, inspection, at});
  if (inspection == Inspection::Passed) {
    try {
      warehouse.restock_all(received, at);
    } catch (const inventory::InventoryError& e) {
      receipts_.erase(it);
      fail(ProcurementErrc::Overflow, e.what());
    } catch (...) {
      receipts_.erase(it);
      throw;
    }
  }
  ++next_receipt_;
  doc.state = ProcurementState::Received;
  record(doc.plan, ProcurementState::Received, at);
  return it->second;
}

const WarehouseWarrant& ProcurementStore::issue_warrant(ReceiptId receipt_id, const PartyId& warehouse, SimTime at) {
  const GoodsReceipt& r = receipt(receipt_id);
  if (r.inspection != Inspection::Passed) {
    fail(ProcurementErrc::InspectionFailed, "receipt " + std::to_string(receipt_id.value) + " was rejected");
  }
  if (warrant_by_receipt_.contains(receipt_id)) {
    fail(ProcurementErrc::DuplicateWarrant, "receipt " + std::to_string(receipt_id.value));
  }
  PurchaseDocument& doc = mutable_document(r.document);
  require_state(doc, ProcurementState::Received);
  if (!registry_->contains(warehouse)) fail(ProcurementErrc::UnknownParty, warehouse.str());

  const WarrantId id{next_warrant_};
  transitions_.reserve(transitions_.size() + 1);
  auto [it, inserted] = warrants_.emplace(id, WarehouseWarrant{id, receipt_id, warehouse});
  try {
    warrant_by_receipt_.emplace(receipt_id, id);
  } catch (...) {
    warrants_.erase(it);
    throw;
  }
  ++next_warrant_;
  doc.state = ProcurementState::WarrantIssued;
  record(doc.plan, ProcurementState::WarrantIssued, at);
  return it->second;
}

const LedgerEntry& ProcurementStore::book_ledger(WarrantId warrant_id, std::string invoice_ref, SimTime at) {
  const WarehouseWarrant& w = warrant(warrant_id);
  const GoodsReceipt& r = receipt(w.receipt);
  PurchaseDocument& doc = mutable_document(r.document);
  require_state(doc, ProcurementState::WarrantIssued);

  // Pay for what was received, priced at the ordered unit cost.
  Money amount = 0;
  try {
    for (const auto& line : r.received) {
      amount = checked_add(amount, checked_mul(line.quantity, find_line(doc.lines, line.sku)->unit_cost));
    }
  } catch (const ArithmeticOverflow&) {
    fail(ProcurementErrc::Overflow, "ledger amount for warrant " + std::to_string(warrant_id.value));
  }

  const EntryId id{next_entry_};
  transitions_.reserve(transitions_.size() + 1);
  auto [it, inserted] = entries_.emplace(id, LedgerEntry{id, warrant_id, std::move(invoice_ref), amount,
                                                         EntryKind::Payable});
  ++next_entry_;
  doc.state = ProcurementState::Booked;
  record(doc.plan, ProcurementState::Booked, at);
  return it->second;
}

ProcurementState ProcurementStore::state_of(PlanId plan_id) const {
  const auto& p = plan(plan_id);
  return p.document ? document(*p.document).state : ProcurementState::Planned;
}

const PurchasePlan& ProcurementStore::plan(PlanId id) const {
  auto it = plans_.find(id);
  if (it == plans_.end()) fail(ProcurementErrc::UnknownPlan, std::to_string(id.value));
  return it->second;
}

const PurchaseDocument& ProcurementStore::document(DocumentId id) const {
  auto it = documents_.find(id);
  if (it == documents_.end()) fail(ProcurementErrc::UnknownDocument, std::to_string(id.value));
  return it->second;
}

PurchaseDocument& ProcurementStore::mutable_document(DocumentId id) {
  auto it = documents_.find(id);
  if (it == documents_.end()) fail(ProcurementErrc::UnknownDocument, std::to_string(id.value));
  return it->second;
}

const GoodsReceipt& ProcurementStore::receipt(ReceiptId id) const {
  auto it = receipts_.find(id);
  if (it == receipts_.end()) fail(ProcurementErrc::UnknownReceipt, std::to_string(id.value));
  return it->second;
}

const WarehouseWarrant& ProcurementStore::warrant(WarrantId id) const {
  auto it = warrants_.find(id);
  if (it == warrants_.end()) fail(ProcurementErrc::UnknownWarrant, std::to_string(id.value));
  return it->second;
}

const Expenditure* ProcurementStore::expenditure(PlanId id) const {
  auto it = expenditures_.find(id);
  return it == expenditures_.end() ? nullptr : &it->second;
}

std::uint64_t ProcurementStore::state_hash() const {
  Fnv1a h;
  h.add(next_plan_);
  h.add(next_document_);
  h.add(next_receipt_);
  h.add(next_warrant_);
  h.add(next_entry_);
  for (const auto& [id, p] : plans_) {
    h.add(id.value);
    h.add(p.requested_by.str());
    h.add(p.created_at.ticks);
    h.add(p.document ? p.document->value : 0);
    for (const auto& line : p.lines) {
      h.add(line.sku.str());
      h.add(line.quantity);
      h.add(line.unit_cost);
    }
  }
  for (const auto& [id, e] : expenditures_) {
    h.add(id.value);
    h.add(e.total);
  }
  for (const auto& [id, d] : documents_) {
    for (const auto& line : render_document(d)) h.add(line);
  }
  for (const auto& [id, r] : receipts_) {
    h.add(id.value);
    h.add(r.document.value);
    h.add(static_cast<std::int64_t>(r.inspection));
    h.add(r.at.ticks);
    for (const auto& line : r.received) {
      h.add(line.sku.str());
      h.add(line.quantity);
    }
  }
  for (const auto& [id, w] : warrants_) {
    h.add(id.value);
    h.add(w.receipt.value);
    h.add(w.warehouse.str());
  }
  for (const auto& [id, e] : entries_) {
    h.add(id.value);
    h.add(e.warrant.value);
    h.add(e.invoice_ref);
    h.add(e.amount);
  }
  for (const auto& t : transitions_) {
    h.add(t.plan.value);
    h.add(to_string(t.state));
    h.add(t.at.ticks);
  }
  return h.value();
}

std::vector<std::string> render_document(const PurchaseDocument& doc, std::string_view id) {
  std::vector<std::string> out;
  out.reserve(doc.lines.size() + 1);
  const std::string shown = id.empty() ? std::to_string(doc.id.value) : std::string(id);
  out.push_back("PO " + shown + " " + doc.supplier.str() + " " + std::string(to_string(doc.state)));
  for (const auto& line : doc.lines) {
    out.push_back("LINE " + line.sku.str() + " " + std::to_string(line.quantity) + " " +
                  std::to_string(line.unit_cost));
  }
  return out;
}

}  // namespace vcsim::procurement
