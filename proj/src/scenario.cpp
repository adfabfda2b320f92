#include "vcsim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "json.hpp"

namespace vcsim::scenario {

using json = nlohmann::json;

std::string_view to_string(AgentRole r) {
  switch (r) {
    case AgentRole::Retailer: return "retailer";
    case AgentRole::Warehouse: return "warehouse";
    case AgentRole::Manufacturer: return "manufacturer";
    case AgentRole::Customer: return "customer";
  }
  return "?";
}

std::optional<AgentRole> parse_agent_role(std::string_view s) {
  for (AgentRole r : {AgentRole::Retailer, AgentRole::Warehouse, AgentRole::Manufacturer, AgentRole::Customer}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

std::optional<AgentRole> Scenario::role_of(const PartyId& id) const {
  if (id == retailer) return AgentRole::Retailer;
  for (const auto& w : warehouses) {
    if (w.id == id) return AgentRole::Warehouse;
  }
  for (const auto& m : manufacturers) {
    if (m.id == id) return AgentRole::Manufacturer;
  }
  if (std::find(customers.begin(), customers.end(), id) != customers.end()) return AgentRole::Customer;
  return std::nullopt;
}

std::vector<PartyId> Scenario::agent_ids() const {
  std::vector<PartyId> ids{retailer};
  for (const auto& w : warehouses) ids.push_back(w.id);
  for (const auto& m : manufacturers) ids.push_back(m.id);
  ids.insert(ids.end(), customers.begin(), customers.end());
  std::sort(ids.begin(), ids.end());
  return ids;
}

// ---------------------------------------------------------------------------
// JSON reading

namespace {

[[noreturn]] void invalid(const std::string& entity, const std::string& reason) { throw ValidationError(entity, reason); }

void expect_object(const json& j, const std::string& entity) {
  if (!j.is_object()) invalid(entity, "expected an object");
}

void expect_array(const json& j, const std::string& entity) {
  if (!j.is_array()) invalid(entity, "expected an array");
}

void expect_keys(const json& obj, const std::string& entity, std::initializer_list<std::string_view> allowed) {
  expect_object(obj, entity);
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) invalid(entity, "unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const char* key, const std::string& entity) {
  auto it = obj.find(key);
  if (it == obj.end()) invalid(entity, std::string("missing key '") + key + "'");
  return *it;
}

std::string as_string(const json& j, const std::string& entity, const char* what) {
  if (!j.is_string()) invalid(entity, std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::string as_token(const json& j, const std::string& entity, const char* what) {
  std::string s = as_string(j, entity, what);
  if (!is_valid_token(s)) invalid(entity, std::string(what) + " '" + s + "' is not a valid identifier");
  return s;
}

std::int64_t as_int(const json& j, const std::string& entity, const char* what) {
  if (!j.is_number_integer()) invalid(entity, std::string(what) + " must be an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    invalid(entity, std::string(what) + " out of range");
  }
  return j.get<std::int64_t>();
}

std::uint64_t as_uint(const json& j, const std::string& entity, const char* what) {
  const std::int64_t v = as_int(j, entity, what);
  if (v < 0) invalid(entity, std::string(what) + " must be non-negative");
  return static_cast<std::uint64_t>(v);
}

std::uint64_t as_positive(const json& j, const std::string& entity, const char* what) {
  const std::uint64_t v = as_uint(j, entity, what);
  if (v == 0) invalid(entity, std::string(what) + " must be positive");
  return v;
}

template <typename Fn>
auto wrap_registry(const std::string& entity, Fn&& fn) {
  try {
    return fn();
  } catch (const party::PartyError& e) {
    invalid(entity, e.what());
  }
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

void read_locations(const json& arr, party::Registry& reg) {
  expect_array(arr, "locations");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string entity = "locations[" + std::to_string(i) + "]";
    const json& j = arr[i];
    expect_keys(j, entity, {"id", "label", "address"});
    party::Location loc{party::LocationId(as_string(require(j, "id", entity), entity, "id")),
                        j.contains("label") ? as_string(j["label"], entity, "label") : std::string{},
                        j.contains("address") ? as_string(j["address"], entity, "address") : std::string{}};
    wrap_registry(entity, [&] {
      reg.add_location(std::move(loc));
      return 0;
    });
  }
}

void read_parties(const json& arr, party::Registry& reg) {
  expect_array(arr, "parties");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string entity = "parties[" + std::to_string(i) + "]";
    const json& j = arr[i];
    expect_keys(j, entity, {"id", "kind", "name", "locations", "roles", "communication_points"});
    const PartyId id(as_string(require(j, "id", entity), entity, "id"));
    entity = "party " + id.str();
    const std::string kind_text = as_string(require(j, "kind", entity), entity, "kind");
    const auto kind = party::parse_party_kind(kind_text);
    if (!kind) invalid(entity, "unknown kind '" + kind_text + "'");
    const std::string name = as_string(require(j, "name", entity), entity, "name");
    std::vector<party::LocationId> locations;
    if (j.contains("locations")) {
      expect_array(j["locations"], entity + ".locations");
      for (const auto& l : j["locations"]) locations.emplace_back(as_string(l, entity, "location"));
    }
    wrap_registry(entity, [&] {
      reg.register_party(id, *kind, name, locations);
      return 0;
    });
    if (j.contains("roles")) {
      expect_array(j["roles"], entity + ".roles");
      for (const auto& r : j["roles"]) {
        const std::string text = as_string(r, entity, "role");
        const auto role = party::parse_role(text);
        if (!role) invalid(entity, "unknown role '" + text + "'");
        wrap_registry(entity, [&] {
          reg.add_role(id, *role);
          return 0;
        });
      }
    }
    if (j.contains("communication_points")) {
      expect_array(j["communication_points"], entity + ".communication_points");
      for (const auto& cp : j["communication_points"]) {
        expect_keys(cp, entity + ".communication_points", {"channel", "address", "purpose"});
        const std::string text = as_string(require(cp, "channel", entity), entity, "channel");
        const auto channel = party::parse_channel(text);
        if (!channel) invalid(entity, "unknown channel '" + text + "'");
        party::CommunicationPoint point{*channel, as_string(require(cp, "address", entity), entity, "address"),
                                        std::nullopt};
        if (cp.contains("purpose")) point.purpose = as_string(cp["purpose"], entity, "purpose");
        wrap_registry(entity, [&] {
          reg.add_communication_point(id, std::move(point));
          return 0;
        });
      }
    }
  }
}

void read_relationships(const json& arr, party::Registry& reg) {
  expect_array(arr, "relationships");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string entity = "relationships[" + std::to_string(i) + "]";
    const json& j = arr[i];
    expect_keys(j, entity, {"id", "from", "to", "type", "start", "end", "customer_code"});
    const PartyId from(as_string(require(j, "from", entity), entity, "from"));
    const PartyId to(as_string(require(j, "to", entity), entity, "to"));
    const std::string type_text = as_string(require(j, "type", entity), entity, "type");
    const auto type = party::parse_relationship_type(type_text);
    if (!type) invalid(entity, "unknown relationship type '" + type_text + "'");
    const SimTime start{j.contains("start") ? as_uint(j["start"], entity, "start") : 0};
    std::optional<SimTime> end;
    if (j.contains("end") && !j["end"].is_null()) end = SimTime{as_uint(j["end"], entity, "end")};

    party::RelationshipId rid = wrap_registry(entity, [&] {
      if (j.contains("id")) {
        party::RelationshipId explicit_id(as_string(j["id"], entity, "id"));
        reg.link_relationship(explicit_id, from, to, *type, start, end);
        return explicit_id;
      }
      return reg.link_relationship(from, to, *type, start, end);
    });
    if (j.contains("customer_code")) {
      const std::string code = as_string(j["customer_code"], entity, "customer_code");
      wrap_registry(entity, [&] {
        reg.assign_customer_code(rid, code);
        return 0;
      });
    }
  }
}

void read_agents(const json& j, Scenario& s) {
  const std::string entity = "agents";
  expect_keys(j, entity, {"retailer", "warehouses", "manufacturers", "customers"});
  const json& retailer = require(j, "retailer", entity);
  if (retailer.is_array()) invalid(entity, "exactly one retailer is required");
  s.retailer = PartyId(as_string(retailer, entity, "retailer"));

  const json& warehouses = require(j, "warehouses", entity);
  expect_array(warehouses, "agents.warehouses");
  for (std::size_t i = 0; i < warehouses.size(); ++i) {
    const std::string e = "agents.warehouses[" + std::to_string(i) + "]";
    const json& w = warehouses[i];
    expect_keys(w, e, {"id", "manufacturer", "reorder_qty"});
    s.warehouses.push_back(WarehouseSpec{PartyId(as_string(require(w, "id", e), e, "id")),
                                         PartyId(as_string(require(w, "manufacturer", e), e, "manufacturer")),
                                         static_cast<Quantity>(as_positive(require(w, "reorder_qty", e), e,
                                                                           "reorder_qty"))});
  }

  const json& manufacturers = require(j, "manufacturers", entity);
  expect_array(manufacturers, "agents.manufacturers");
  for (std::size_t i = 0; i < manufacturers.size(); ++i) {
    const std::string e = "agents.manufacturers[" + std::to_string(i) + "]";
    const json& m = manufacturers[i];
    expect_keys(m, e, {"id", "production_delay"});
    s.manufacturers.push_back(ManufacturerSpec{PartyId(as_string(require(m, "id", e), e, "id")),
                                               as_positive(require(m, "production_delay", e), e,
                                                           "production_delay")});
  }

  const json& customers = require(j, "customers", entity);
  expect_array(customers, "agents.customers");
  for (const auto& c : customers) s.customers.emplace_back(as_string(c, "agents.customers", "customer"));
}

void read_catalog(const json& arr, Scenario& s) {
  expect_array(arr, "catalog");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string entity = "catalog[" + std::to_string(i) + "]";
    const json& j = arr[i];
    expect_keys(j, entity, {"sku", "unit_price", "unit_cost"});
    const Sku sku(as_token(require(j, "sku", entity), entity, "sku"));
    entity = "sku " + sku.str();
    const std::int64_t price = as_int(require(j, "unit_price", entity), entity, "unit_price");
    const std::int64_t cost = as_int(require(j, "unit_cost", entity), entity, "unit_cost");
    if (price < 0) invalid(entity, "unit_price must be non-negative");
    if (cost < 0) invalid(entity, "unit_cost must be non-negative");
    if (!s.catalog.emplace(sku, protocol::CatalogItem{price, cost}).second) invalid(entity, "duplicate sku");
  }
}

void read_inventory(const json& obj, Scenario& s) {
  expect_object(obj, "inventory");
  for (const auto& [owner, stock] : obj.items()) {
    const std::string entity = "inventory." + owner;
    expect_object(stock, entity);
    auto& rows = s.inventory[PartyId(owner)];
    for (const auto& [sku, qty] : stock.items()) {
      const std::int64_t q = as_int(qty, entity, "quantity");
      if (q < 0) invalid(entity, "quantity of " + sku + " must be non-negative");
      rows[Sku(sku)] = q;
    }
  }
}

void read_orders(const json& arr, Scenario& s) {
  expect_array(arr, "orders");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string entity = "orders[" + std::to_string(i) + "]";
    const json& j = arr[i];
    expect_keys(j, entity, {"id", "time", "buyer", "sku", "qty"});
    OrderArrival order;
    order.id = protocol::OrderId(j.contains("id") ? as_token(j["id"], entity, "id") : "O" + std::to_string(i + 1));
    order.time = SimTime{as_uint(require(j, "time", entity), entity, "time")};
    order.buyer = PartyId(as_string(require(j, "buyer", entity), entity, "buyer"));
    order.sku = Sku(as_string(require(j, "sku", entity), entity, "sku"));
    order.qty = as_int(require(j, "qty", entity), entity, "qty");
    s.orders.push_back(std::move(order));
  }
}

void read_latency(const json& j, Scenario& s) {
  const std::string entity = "latency";
  expect_keys(j, entity, {"default", "pairs", "seeded"});
  if (j.contains("default")) s.latency.default_ticks = as_positive(j["default"], entity, "default");
  if (j.contains("pairs")) {
    expect_array(j["pairs"], "latency.pairs");
    for (const auto& p : j["pairs"]) {
      expect_keys(p, "latency.pairs", {"from", "to", "ticks"});
      RoleLatency rl;
      for (auto [key, slot] : {std::pair{"from", &rl.from}, std::pair{"to", &rl.to}}) {
        const std::string text = as_string(require(p, key, "latency.pairs"), "latency.pairs", key);
        const auto role = parse_agent_role(text);
        if (!role) invalid("latency.pairs", "unknown role '" + text + "'");
        *slot = *role;
      }
      rl.ticks = as_positive(require(p, "ticks", "latency.pairs"), "latency.pairs", "ticks");
      s.latency.pairs.push_back(rl);
    }
  }
  if (j.contains("seeded")) {
    const json& sj = j["seeded"];
    expect_keys(sj, "latency.seeded", {"seed", "min", "max"});
    SeededLatency seeded;
    seeded.seed = as_uint(require(sj, "seed", "latency.seeded"), "latency.seeded", "seed");
    seeded.min = as_positive(require(sj, "min", "latency.seeded"), "latency.seeded", "min");
    seeded.max = as_positive(require(sj, "max", "latency.seeded"), "latency.seeded", "max");
    if (seeded.max < seeded.min) invalid("latency.seeded", "max must be >= min");
    s.latency.seeded = seeded;
  }
}

void read_params(const json& j, Params& p) {
  expect_keys(j, "params", {"bucket_width", "max_events", "inject_duplicate_po_submit"});
  if (j.contains("bucket_width")) p.bucket_width = as_positive(j["bucket_width"], "params", "bucket_width");
  if (j.contains("max_events")) p.max_events = as_positive(j["max_events"], "params", "max_events");
  if (j.contains("inject_duplicate_po_submit")) {
    if (!j["inject_duplicate_po_submit"].is_boolean()) invalid("params", "inject_duplicate_po_submit must be boolean");
    p.inject_duplicate_po_submit = j["inject_duplicate_po_submit"].get<bool>();
  }
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(line_of(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }

  expect_keys(doc, "scenario",
              {"parties", "locations", "relationships", "agents", "catalog", "inventory", "orders", "latency",
               "params"});

  Params params;
  if (doc.contains("params")) read_params(doc["params"], params);

  Scenario s{party::Registry(params.bucket_width), {}, {}, {}, {}, {}, {}, {}, {}, params};
  if (doc.contains("locations")) read_locations(doc["locations"], s.registry);
  read_parties(require(doc, "parties", "scenario"), s.registry);
  if (doc.contains("relationships")) read_relationships(doc["relationships"], s.registry);
  read_agents(require(doc, "agents", "scenario"), s);
  read_catalog(require(doc, "catalog", "scenario"), s);
  if (doc.contains("inventory")) read_inventory(doc["inventory"], s);
  if (doc.contains("orders")) read_orders(doc["orders"], s);
  if (doc.contains("latency")) read_latency(doc["latency"], s);

  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string(), "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// Validation

void validate(const Scenario& s) {
  const auto& reg = s.registry;
  auto require_party = [&](const PartyId& id, const std::string& entity) {
    if (!is_valid_token(id.str())) invalid(entity, "'" + id.str() + "' is not a valid identifier");
    if (!reg.contains(id)) invalid(entity, "unknown party '" + id.str() + "'");
  };

  require_party(s.retailer, "agents.retailer");
  if (s.warehouses.empty()) invalid("agents", "at least one warehouse is required");
  if (s.manufacturers.empty()) invalid("agents", "at least one manufacturer is required");
  if (s.customers.empty()) invalid("agents", "at least one customer is required");

  std::set<PartyId> seen{s.retailer};
  auto claim = [&](const PartyId& id, const std::string& entity) {
    require_party(id, entity);
    if (!seen.insert(id).second) invalid(entity, id.str() + " already has an agent role");
  };
  for (const auto& m : s.manufacturers) {
    claim(m.id, "manufacturer " + m.id.str());
    if (m.production_delay == 0) invalid("manufacturer " + m.id.str(), "production_delay must be positive");
  }
  for (const auto& w : s.warehouses) {
    const std::string entity = "warehouse " + w.id.str();
    claim(w.id, entity);
    if (w.reorder_qty < 1) invalid(entity, "reorder_qty must be positive");
    const bool declared = std::any_of(s.manufacturers.begin(), s.manufacturers.end(),
                                      [&](const ManufacturerSpec& m) { return m.id == w.manufacturer; });
    if (!declared) invalid(entity, "manufacturer '" + w.manufacturer.str() + "' is not a declared manufacturer");
    const auto link = reg.find_link(w.manufacturer, w.id, party::RelationshipType::SupplierTo, SimTime{0});
    if (!link || reg.relationship(*link).end) {
      invalid(entity, "no open-ended SupplierTo relationship from " + w.manufacturer.str() + " active from time 0");
    }
  }
  for (const auto& c : s.customers) claim(c, "customer " + c.str());

  for (const auto& [id, p] : reg.parties()) {
    if (p.kind == party::PartyKind::Person && p.roles.contains(party::Role::Seller) && id != s.retailer) {
      invalid("party " + id.str(), "a person may hold the seller role only as the retailer agent");
    }
  }

  if (s.catalog.empty()) invalid("catalog", "at least one sku is required");

  for (const auto& [owner, rows] : s.inventory) {
    const std::string entity = "inventory." + owner.str();
    const auto role = s.role_of(owner);
    if (role != AgentRole::Warehouse && role != AgentRole::Retailer) {
      invalid(entity, "only the retailer and warehouses hold stock");
    }
    for (const auto& [sku, qty] : rows) {
      if (!s.catalog.contains(sku)) invalid(entity, "unknown sku '" + sku.str() + "'");
      if (qty < 0) invalid(entity, "negative quantity for " + sku.str());
    }
  }

  std::set<protocol::OrderId> order_ids;
  for (const auto& o : s.orders) {
    const std::string entity = "order " + o.id.str();
    if (!is_valid_token(o.id.str())) invalid(entity, "invalid order id");
    if (!order_ids.insert(o.id).second) invalid(entity, "duplicate order id");
    if (s.role_of(o.buyer) != AgentRole::Customer) invalid(entity, "buyer '" + o.buyer.str() + "' is not a customer");
    if (!s.catalog.contains(o.sku)) invalid(entity, "unknown sku '" + o.sku.str() + "'");
    if (o.qty < 1) invalid(entity, "qty must be at least 1");
    if (!reg.customers_of(s.retailer, o.time).contains(o.buyer)) {
      invalid(entity, o.buyer.str() + " is not a customer of " + s.retailer.str() + " at time " +
                          std::to_string(o.time.ticks));
    }
  }

  if (s.latency.default_ticks == 0) invalid("latency", "default must be positive");
  for (const auto& p : s.latency.pairs) {
    if (p.ticks == 0) invalid("latency.pairs", "ticks must be positive");
  }
  if (s.latency.seeded && (s.latency.seeded->min == 0 || s.latency.seeded->max < s.latency.seeded->min)) {
    invalid("latency.seeded", "range must satisfy 1 <= min <= max");
  }
  if (s.params.max_events == 0) invalid("params", "max_events must be positive");
}

sim::LatencyTable build_latency_table(const Scenario& s) {
  sim::LatencyTable table(s.latency.default_ticks);
  const auto ids = s.agent_ids();
  if (s.latency.seeded) {
    // Drawn once per ordered pair, iterating both ids in ascending order.
    sim::Lcg64 rng(s.latency.seeded->seed);
    for (const auto& from : ids) {
      for (const auto& to : ids) {
        if (from == to) continue;
        table.set(from, to, rng.next_in(s.latency.seeded->min, s.latency.seeded->max));
      }
    }
    return table;
  }
  for (const auto& from : ids) {
    for (const auto& to : ids) {
      if (from == to) continue;
      const auto from_role = s.role_of(from);
      const auto to_role = s.role_of(to);
      for (const auto& p : s.latency.pairs) {
        if (p.from == from_role && p.to == to_role) table.set(from, to, p.ticks);
      }
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// World

namespace {

class RetailerAgent final : public sim::Agent {
 public:
  RetailerAgent(protocol::RetailerState state, PartyId self, const protocol::Catalog& catalog)
      : state_(std::move(state)), ledger_(std::move(self)), catalog_(catalog) {}

  sim::Reaction handle(const sim::Envelope& in, const sim::DispatchContext& ctx) override {
    return protocol::retailer_handle_in_place(state_, in, protocol::HandlerContext{catalog_, ctx.latency});
  }
  const inventory::Ledger* ledger() const override { return &ledger_; }

  protocol::RetailerState state_;
  inventory::Ledger ledger_;

 private:
  const protocol::Catalog& catalog_;
};

class WarehouseAgent final : public sim::Agent {
 public:
  WarehouseAgent(protocol::WarehouseState state, const protocol::Catalog& catalog, bool duplicate_po_submit)
      : state_(std::move(state)), catalog_(catalog), duplicate_po_submit_(duplicate_po_submit) {}

  sim::Reaction handle(const sim::Envelope& in, const sim::DispatchContext& ctx) override {
    sim::Reaction r = protocol::warehouse_handle_in_place(state_, in, protocol::HandlerContext{catalog_, ctx.latency});
    if (duplicate_po_submit_) {
      std::vector<sim::Outgoing> expanded;
      for (auto& out : r.outgoing) {
        const bool dup = std::holds_alternative<protocol::POSubmit>(out.payload);
        expanded.push_back(out);
        if (dup) expanded.push_back(std::move(out));
      }
      r.outgoing = std::move(expanded);
    }
    return r;
  }
  const inventory::Ledger* ledger() const override { return &state_.ledger; }

  protocol::WarehouseState state_;

 private:
  const protocol::Catalog& catalog_;
  bool duplicate_po_submit_;
};

class ManufacturerAgent final : public sim::Agent {
 public:
  ManufacturerAgent(protocol::ManufacturerState state, const protocol::Catalog& catalog)
      : state_(std::move(state)), catalog_(catalog) {}

  sim::Reaction handle(const sim::Envelope& in, const sim::DispatchContext& ctx) override {
    return protocol::manufacturer_handle_in_place(state_, in, protocol::HandlerContext{catalog_, ctx.latency});
  }

  protocol::ManufacturerState state_;

 private:
  const protocol::Catalog& catalog_;
};

class CustomerAgent final : public sim::Agent {
 public:
  CustomerAgent(protocol::CustomerState state, const protocol::Catalog& catalog)
      : state_(std::move(state)), catalog_(catalog) {}

  sim::Reaction handle(const sim::Envelope& in, const sim::DispatchContext& ctx) override {
    return protocol::customer_handle_in_place(state_, in, protocol::HandlerContext{catalog_, ctx.latency});
  }

  protocol::CustomerState state_;

 private:
  const protocol::Catalog& catalog_;
};

template <typename AgentT>
const AgentT& agent_as(const sim::Simulation& sim, const PartyId& id) {
  const auto* a = dynamic_cast<const AgentT*>(sim.agent(id));
  if (a == nullptr) throw std::out_of_range("no such agent: " + id.str());
  return *a;
}

}  // namespace

World::World(const Scenario& s) : World(s, build_latency_table(s)) {}

World::World(const Scenario& s, sim::LatencyTable latency)
    : max_events_(s.params.max_events),
      retailer_(s.retailer),
      registry_(std::make_unique<party::Registry>(s.registry)),
      catalog_(std::make_unique<protocol::Catalog>(s.catalog)),
      sim_(std::make_unique<sim::Simulation>(std::move(latency))) {
  build(s);
}

void World::build(const Scenario& s) {
  sim::Simulation& sim = *sim_;

  sim.note("setup retailer " + s.retailer.str());
  protocol::RetailerState retailer_state;
  retailer_state.self = s.retailer;
  for (const auto& w : s.warehouses) retailer_state.known_warehouses.push_back(w.id);
  auto retailer = std::make_unique<RetailerAgent>(std::move(retailer_state), s.retailer, *catalog_);

  for (const auto& m : s.manufacturers) {
    sim.note("setup manufacturer " + m.id.str() + " delay " + std::to_string(m.production_delay));
    manufacturers_.push_back(m.id);
    sim.add_agent(m.id, std::make_unique<ManufacturerAgent>(protocol::ManufacturerState{m.id, m.production_delay, {}},
                                                            *catalog_));
  }
  for (const auto& c : s.customers) {
    sim.note("setup customer " + c.str());
    customers_.push_back(c);
    sim.add_agent(c, std::make_unique<CustomerAgent>(protocol::CustomerState{c, {}, {}}, *catalog_));
  }

  auto seed_ledger = [&](inventory::Ledger& ledger) {
    auto it = s.inventory.find(ledger.owner());
    if (it == s.inventory.end()) return;
    sim.note("inventory " + ledger.owner().str());
    for (const auto& [sku, qty] : it->second) {
      if (qty == 0) continue;
      ledger.seed(sku, qty, SimTime{0});
      sim.note_inventory(ledger.history().back());
    }
  };

  seed_ledger(retailer->ledger_);
  sim.add_agent(s.retailer, std::move(retailer));

  for (const auto& w : s.warehouses) {
    sim.note("setup warehouse " + w.id.str() + " manufacturer " + w.manufacturer.str() + " reorder " +
             std::to_string(w.reorder_qty));
    warehouses_.push_back(w.id);
    auto agent = std::make_unique<WarehouseAgent>(
        protocol::WarehouseState(w.id, w.manufacturer, w.reorder_qty, *registry_), *catalog_,
        s.params.inject_duplicate_po_submit);
    seed_ledger(agent->state_.ledger);
    sim.add_agent(w.id, std::move(agent));
  }

  for (const auto& o : s.orders) {
    sim.send(o.buyer, s.retailer, protocol::CustomerOrder{o.id, o.buyer, o.sku, o.qty}, o.time);
  }

  party::Registry* reg = registry_.get();
  const PartyId retailer_id = s.retailer;
  sim.set_interaction_sink([reg, retailer_id](const sim::Interaction& interaction) {
    auto rel = reg->find_link(interaction.buyer, retailer_id, party::RelationshipType::CustomerOf, interaction.at);
    if (!rel) rel = reg->find_link(interaction.buyer, retailer_id, party::RelationshipType::CustomerOf);
    if (rel) reg->record_interaction(*rel, interaction.at, interaction.value);
  });
}

const sim::EventLog& World::run() { return sim_->run(max_events_); }

const protocol::RetailerState& World::retailer() const { return agent_as<RetailerAgent>(*sim_, retailer_).state_; }

const protocol::WarehouseState& World::warehouse(const PartyId& id) const {
  return agent_as<WarehouseAgent>(*sim_, id).state_;
}

const protocol::ManufacturerState& World::manufacturer(const PartyId& id) const {
  return agent_as<ManufacturerAgent>(*sim_, id).state_;
}

const protocol::CustomerState& World::customer(const PartyId& id) const {
  return agent_as<CustomerAgent>(*sim_, id).state_;
}

std::map<PartyId, const inventory::Ledger*> World::ledgers() const {
  std::map<PartyId, const inventory::Ledger*> out;
  out.emplace(retailer_, &agent_as<RetailerAgent>(*sim_, retailer_).ledger_);
  for (const auto& w : warehouses_) out.emplace(w, &warehouse(w).ledger);
  return out;
}

RunResult run_scenario(const Scenario& s) { return run_scenario(s, build_latency_table(s)); }

RunResult run_scenario(const Scenario& s, sim::LatencyTable latency) {
  RunResult result{std::make_unique<World>(s, std::move(latency)), {}};
  result.rendered = result.world->run().render();
  return result;
}

ReplayReport compare_logs(std::string_view a, std::string_view b) {
  if (a == b) return {};
  std::size_t line = 1;
  std::size_t pos_a = 0;
  std::size_t pos_b = 0;
  while (true) {
    const std::size_t end_a = std::min(a.find('\n', pos_a), a.size());
    const std::size_t end_b = std::min(b.find('\n', pos_b), b.size());
    const std::string_view la = pos_a < a.size() ? a.substr(pos_a, end_a - pos_a) : std::string_view{};
    const std::string_view lb = pos_b < b.size() ? b.substr(pos_b, end_b - pos_b) : std::string_view{};
    if (la != lb || (pos_a >= a.size()) != (pos_b >= b.size())) {
      return ReplayReport{false, line, std::string(la), std::string(lb)};
    }
    pos_a = end_a + 1;
    pos_b = end_b + 1;
    ++line;
  }
}

ReplayReport replay_check(const Scenario& s) { return replay_check(s, s); }

ReplayReport replay_check(const Scenario& s, const Scenario& other) {
  const RunResult first = run_scenario(s);
  const RunResult second = run_scenario(other);
  return compare_logs(first.rendered, second.rendered);
}

}  // namespace vcsim::scenario
