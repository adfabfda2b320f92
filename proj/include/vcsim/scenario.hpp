#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vcsim/agents.hpp"
#include "vcsim/core.hpp"
#include "vcsim/messages.hpp"
#include "vcsim/party_model.hpp"
#include "vcsim/sim_engine.hpp"

namespace vcsim::scenario {

enum class AgentRole { Retailer, Warehouse, Manufacturer, Customer };

std::string_view to_string(AgentRole r);
std::optional<AgentRole> parse_agent_role(std::string_view s);

struct WarehouseSpec {
  PartyId id;
  PartyId manufacturer;
  Quantity reorder_qty = 1;
};

struct ManufacturerSpec {
  PartyId id;
  std::uint64_t production_delay = 1;
};

struct OrderArrival {
  protocol::OrderId id;
  SimTime time;
  PartyId buyer;
  Sku sku;
  Quantity qty = 0;
};

struct RoleLatency {
  AgentRole from = AgentRole::Retailer;
  AgentRole to = AgentRole::Warehouse;
  std::uint64_t ticks = 1;
};

struct SeededLatency {
  std::uint64_t seed = 0;
  std::uint64_t min = 1;
  std::uint64_t max = 1;
};

struct LatencySpec {
  std::uint64_t default_ticks = 1;
  std::vector<RoleLatency> pairs;
  std::optional<SeededLatency> seeded;
};

struct Params {
  std::uint64_t bucket_width = party::Registry::kDefaultBucketWidth;
  std::uint64_t max_events = sim::Simulation::kDefaultMaxEvents;
  // Fault injection: every POSubmit a warehouse emits is sent twice.
  bool inject_duplicate_po_submit = false;
};

struct Scenario {
  party::Registry registry;
  PartyId retailer;
  std::vector<WarehouseSpec> warehouses;
  std::vector<ManufacturerSpec> manufacturers;
  std::vector<PartyId> customers;
  protocol::Catalog catalog;
  std::map<PartyId, std::map<Sku, Quantity>> inventory;
  std::vector<OrderArrival> orders;
  LatencySpec latency;
  Params params;

  std::optional<AgentRole> role_of(const PartyId& id) const;
  // Every agent id, sorted.
  std::vector<PartyId> agent_ids() const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string reason)
      : std::runtime_error("parse error at line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(std::move(reason)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string entity, std::string reason)
      : std::runtime_error("invalid " + entity + ": " + reason), entity_(std::move(entity)), reason_(std::move(reason)) {}

  const std::string& entity() const noexcept { return entity_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string entity_;
  std::string reason_;
};

// Parses and fully validates a scenario document, filling defaults.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

// Cross-reference checks; parse_scenario already runs these.
void validate(const Scenario& s);

sim::LatencyTable build_latency_table(const Scenario& s);

// A scenario instantiated as agents on a simulation, ready to run.
class World {
 public:
  explicit World(const Scenario& s);
  World(const Scenario& s, sim::LatencyTable latency);

  World(const World&) = delete;
  World& operator=(const World&) = delete;

  const sim::EventLog& run();

  sim::Simulation& simulation() noexcept { return *sim_; }
  const sim::Simulation& simulation() const noexcept { return *sim_; }
  const party::Registry& registry() const noexcept { return *registry_; }
  const protocol::RetailerState& retailer() const;
  const protocol::WarehouseState& warehouse(const PartyId& id) const;
  const protocol::ManufacturerState& manufacturer(const PartyId& id) const;
  const protocol::CustomerState& customer(const PartyId& id) const;
  // Every stock-holding agent: the retailer and all warehouses.
  std::map<PartyId, const inventory::Ledger*> ledgers() const;

 private:
  void build(const Scenario& s);

  std::uint64_t max_events_;
  PartyId retailer_;
  std::vector<PartyId> warehouses_;
  std::vector<PartyId> manufacturers_;
  std::vector<PartyId> customers_;
  std::unique_ptr<party::Registry> registry_;
  std::unique_ptr<protocol::Catalog> catalog_;
  std::unique_ptr<sim::Simulation> sim_;
};

struct RunResult {
  std::unique_ptr<World> world;
  std::string rendered;

  const sim::EventLog& log() const { return world->simulation().log(); }
};

RunResult run_scenario(const Scenario& s);
RunResult run_scenario(const Scenario& s, sim::LatencyTable latency);

struct ReplayReport {
  bool pass = true;
  std::size_t line = 0;  // 1-based first differing line when !pass
  std::string first;
  std::string second;
};

ReplayReport compare_logs(std::string_view a, std::string_view b);

// Runs the scenario twice and byte-compares the logs.
ReplayReport replay_check(const Scenario& s);
// Compares a run of `s` against a run of `other`.
ReplayReport replay_check(const Scenario& s, const Scenario& other);

}  // namespace vcsim::scenario
