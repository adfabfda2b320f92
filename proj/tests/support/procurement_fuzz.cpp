#include "procurement_fuzz.hpp"

#include <optional>
#include <random>

#include "vcsim/procurement.hpp"

namespace vcsim::testing {

using namespace vcsim::procurement;

namespace {

struct ModelPlan {
  PlanId id;
  int stage = 0;
  std::optional<DocumentId> document;
  std::optional<ReceiptId> receipt;
  std::optional<WarrantId> warrant;
  bool rejected = false;
  Quantity ordered = 0;
};

const Sku kSku{"A"};

}  // namespace

ProcurementFuzzReport fuzz_procurement(std::uint64_t seed, int steps) {
  ProcurementFuzzReport report;
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); };

  party::Registry reg;
  const PartyId buyer("W1"), supplier("M1");
  reg.register_party(buyer, party::PartyKind::Organization, "Depot", {});
  reg.register_party(supplier, party::PartyKind::Organization, "Maker", {});
  reg.link_relationship(supplier, buyer, party::RelationshipType::SupplierTo, SimTime{0});
  ProcurementStore store(reg);
  inventory::Ledger ledger(buyer);
  std::vector<ModelPlan> model;

  auto problem = [&](int step, const std::string& what) {
    report.problems.push_back("seed " + std::to_string(seed) + " step " + std::to_string(step) + ": " + what);
  };

  for (int step = 0; step < steps; ++step) {
    const SimTime now{static_cast<std::uint64_t>(step)};
    const std::uint64_t store_hash = store.state_hash();
    const std::uint64_t stock_hash = ledger.state_hash();
    // Index into the model, or model.size() for an id nobody issued.
    const std::size_t target = model.empty() ? 0 : pick(model.size() + 1);
    ModelPlan* p = target < model.size() ? &model[target] : nullptr;

    std::optional<ProcurementErrc> expected;
    std::optional<ProcurementErrc> actual;
    std::string op;
    try {
      switch (model.empty() ? 0 : pick(6)) {
        case 0: {
          op = "create";
          const Quantity qty = static_cast<Quantity>(1 + pick(20));
          const auto& plan = store.create_plan(buyer, {{kSku, qty, static_cast<Money>(pick(500))}}, now);
          model.push_back(ModelPlan{plan.id, 0, {}, {}, {}, false, qty});
          break;
        }
        case 1: {
          op = "expenditure";
          if (!p) expected = ProcurementErrc::UnknownPlan;
          store.formulate_expenditure(p ? p->id : PlanId{9999});
          break;
        }
        case 2: {
          op = "transmit";
          if (!p) {
            expected = ProcurementErrc::UnknownPlan;
          } else if (p->stage != 0) {
            expected = ProcurementErrc::WrongState;
          }
          const auto& doc = store.transmit_document(p ? p->id : PlanId{9999}, supplier, now);
          if (expected) break;
          p->document = doc.id;
          p->stage = 1;
          break;
        }
        case 3: {
          op = "receive";
          if (!p || !p->document) {
            expected = ProcurementErrc::UnknownDocument;
          } else if (p->stage != 1) {
            expected = ProcurementErrc::WrongState;
          }
          const bool reject = pick(10) == 0;
          const Quantity qty = p ? static_cast<Quantity>(1 + pick(static_cast<std::uint64_t>(p->ordered))) : 1;
          const DocumentId doc = p && p->document ? *p->document : DocumentId{9999};
          const auto& receipt = store.receive_goods(doc, {{kSku, qty}},
                                                    reject ? Inspection::Rejected : Inspection::Passed, now, ledger);
          if (expected) break;
          p->receipt = receipt.id;
          p->rejected = reject;
          p->stage = 2;
          break;
        }
        case 4: {
          op = "warrant";
          if (!p || !p->receipt) {
            expected = ProcurementErrc::UnknownReceipt;
          } else if (p->rejected) {
            expected = ProcurementErrc::InspectionFailed;
          } else if (p->warrant) {
            expected = ProcurementErrc::DuplicateWarrant;
          } else if (p->stage != 2) {
            expected = ProcurementErrc::WrongState;
          }
          const auto& w = store.issue_warrant(p && p->receipt ? *p->receipt : ReceiptId{9999}, buyer, now);
          if (expected) break;
          p->warrant = w.id;
          p->stage = 3;
          break;
        }
        default: {
          op = "book";
          if (!p || !p->warrant) {
            expected = ProcurementErrc::UnknownWarrant;
          } else if (p->stage != 3) {
            expected = ProcurementErrc::WrongState;
          }
          store.book_ledger(p && p->warrant ? *p->warrant : WarrantId{9999}, "INV", now);
          if (expected) break;
          p->stage = 4;
          ++report.booked;
          break;
        }
      }
    } catch (const ProcurementError& e) {
      actual = e.code();
    }
    ++report.operations;

    if (actual != expected) {
      problem(step, op + " returned " + (actual ? std::string(to_string(*actual)) : "ok") + ", model expected " +
                        (expected ? std::string(to_string(*expected)) : "ok"));
      break;  // the model no longer tracks the store
    }
    if (actual) {
      ++report.rejected_calls;
      if (store.state_hash() != store_hash) problem(step, op + " failed but changed the store");
      if (ledger.state_hash() != stock_hash) problem(step, op + " failed but changed stock");
    }
  }

  std::map<PlanId, std::vector<ProcurementState>> traces;
  for (const auto& t : store.transitions()) traces[t.plan].push_back(t.state);
  for (const auto& [plan, trace] : traces) {
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (static_cast<std::size_t>(trace[i]) != i) {
        problem(-1, "plan " + std::to_string(plan.value) + " trace is not a chain prefix");
        break;
      }
    }
  }
  for (const auto& m : model) {
    if (store.state_of(m.id) != static_cast<ProcurementState>(m.stage)) {
      problem(-1, "plan " + std::to_string(m.id.value) + " state differs from the model");
    }
  }
  return report;
}

}  // namespace vcsim::testing
