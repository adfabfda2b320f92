#pragma once

// Four-stage purchasing workflow: plan and expenditure, purchase document
// transmission, goods receipt with inspection and warehouse warrant, and the
// finance ledger booking. Documents move strictly along
// Planned -> Transmitted -> Received -> WarrantIssued -> Booked.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vcsim/core.hpp"
#include "vcsim/inventory.hpp"
#include "vcsim/party_model.hpp"

namespace vcsim::procurement {

enum class ProcurementState { Planned, Transmitted, Received, WarrantIssued, Booked };

std::string_view to_string(ProcurementState s);

enum class Inspection { Passed, Rejected };

enum class EntryKind { Payable };

enum class ProcurementErrc {
  EmptyPlan,
  DuplicateSku,
  NonPositiveQuantity,
  NegativeCost,
  UnknownPlan,
  UnknownDocument,
  UnknownReceipt,
  UnknownWarrant,
  UnknownParty,
  WrongState,
  NotASupplier,
  UnknownSku,
  OverDelivery,
  InspectionFailed,
  DuplicateWarrant,
  Overflow,
};

std::string_view to_string(ProcurementErrc e);

using ProcurementError = Error<ProcurementErrc>;

// Sequential per-kind identifiers.
template <typename Tag>
struct SeqId {
  std::uint64_t value = 0;
  auto operator<=>(const SeqId&) const = default;
};

using PlanId = SeqId<struct PlanTag>;
using DocumentId = SeqId<struct DocumentTag>;
using ReceiptId = SeqId<struct ReceiptTag>;
using WarrantId = SeqId<struct WarrantTag>;
using EntryId = SeqId<struct EntryTag>;

struct PlanLine {
  Sku sku;
  Quantity quantity = 0;
  Money unit_cost = 0;

  bool operator==(const PlanLine&) const = default;
};

struct PurchasePlan {
  PlanId id;
  std::vector<PlanLine> lines;
  PartyId requested_by;
  SimTime created_at;
  std::optional<DocumentId> document;
};

struct Expenditure {
  PlanId plan;
  Money total = 0;
};

struct PurchaseDocument {
  DocumentId id;
  PlanId plan;
  PartyId supplier;
  std::vector<PlanLine> lines;
  ProcurementState state = ProcurementState::Transmitted;
};

using ReceivedLine = inventory::StockLine;

struct GoodsReceipt {
  ReceiptId id;
  DocumentId document;
  std::vector<ReceivedLine> received;
  Inspection inspection = Inspection::Passed;
  SimTime at;
};

struct WarehouseWarrant {
  WarrantId id;
  ReceiptId receipt;
  PartyId warehouse;
};

struct LedgerEntry {
  EntryId id;
  WarrantId warrant;
  std::string invoice_ref;
  Money amount = 0;
  EntryKind kind = EntryKind::Payable;
};

struct Transition {
  PlanId plan;
  ProcurementState state = ProcurementState::Planned;
  SimTime at;
};

// Exact Σ quantity × unit_cost; throws ArithmeticOverflow beyond int64.
Money line_total(const std::vector<PlanLine>& lines);

class ProcurementStore {
 public:
  // The registry must outlive the store; it is only read.
  explicit ProcurementStore(const party::Registry& registry) : registry_(&registry) {}

  const PurchasePlan& create_plan(const PartyId& requested_by, std::vector<PlanLine> lines, SimTime at);

  // Idempotent: a plan has exactly one expenditure.
  const Expenditure& formulate_expenditure(PlanId plan);

  const PurchaseDocument& transmit_document(PlanId plan, const PartyId& supplier, SimTime at);

  // On Passed inspection the received goods are restocked into `warehouse`
  // in the same all-or-nothing step that records the receipt.
  const GoodsReceipt& receive_goods(DocumentId document, std::vector<ReceivedLine> received, Inspection inspection,
                                    SimTime at, inventory::Ledger& warehouse);

  const WarehouseWarrant& issue_warrant(ReceiptId receipt, const PartyId& warehouse, SimTime at);

  const LedgerEntry& book_ledger(WarrantId warrant, std::string invoice_ref, SimTime at);

  ProcurementState state_of(PlanId plan) const;

  const PurchasePlan& plan(PlanId id) const;
  const PurchaseDocument& document(DocumentId id) const;
  const GoodsReceipt& receipt(ReceiptId id) const;
  const WarehouseWarrant& warrant(WarrantId id) const;
  const Expenditure* expenditure(PlanId id) const;

  const std::map<PlanId, PurchasePlan>& plans() const noexcept { return plans_; }
  const std::map<DocumentId, PurchaseDocument>& documents() const noexcept { return documents_; }
  const std::map<ReceiptId, GoodsReceipt>& receipts() const noexcept { return receipts_; }
  const std::map<WarrantId, WarehouseWarrant>& warrants() const noexcept { return warrants_; }
  const std::map<EntryId, LedgerEntry>& entries() const noexcept { return entries_; }
  const std::vector<Transition>& transitions() const noexcept { return transitions_; }

  std::uint64_t state_hash() const;

 private:
  PurchaseDocument& mutable_document(DocumentId id);
  void record(PlanId plan, ProcurementState state, SimTime at) noexcept;

  const party::Registry* registry_;
  std::uint64_t next_plan_ = 1;
  std::uint64_t next_document_ = 1;
  std::uint64_t next_receipt_ = 1;
  std::uint64_t next_warrant_ = 1;
  std::uint64_t next_entry_ = 1;
  std::map<PlanId, PurchasePlan> plans_;
  std::map<PlanId, Expenditure> expenditures_;
  std::map<DocumentId, PurchaseDocument> documents_;
  std::map<ReceiptId, GoodsReceipt> receipts_;
  std::map<ReceiptId, WarrantId> warrant_by_receipt_;
  std::map<WarrantId, WarehouseWarrant> warrants_;
  std::map<EntryId, LedgerEntry> entries_;
  std::vector<Transition> transitions_;
};

// Canonical text form of a document: `PO <id> <supplier> <state>` followed by
// one `LINE <sku> <qty> <unit_cost>` per line. `id` defaults to the numeric
// document id.
std::vector<std::string> render_document(const PurchaseDocument& doc, std::string_view id = {});

}  // namespace vcsim::procurement
