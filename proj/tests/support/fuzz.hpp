#pragma once

#include <cstdint>
#include <string>

#include "vcsim/scenario.hpp"

namespace vcsim::testing {

enum class Duplicates { Never, Sometimes, Always };

struct FuzzLimits {
  int max_warehouses = 5;
  int max_manufacturers = 3;
  int max_customers = 4;
  int max_skus = 3;
  int max_orders = 200;
  Quantity max_stock = 30;
  Quantity max_qty = 8;
  Duplicates duplicates = Duplicates::Sometimes;
  // Starve one warehouse so at least one request is declined.
  bool force_shortage = false;
};

// A random but valid scenario document.
std::string fuzz_scenario_json(std::uint64_t seed, const FuzzLimits& limits = {});

scenario::Scenario fuzz_scenario(std::uint64_t seed, const FuzzLimits& limits = {});

}  // namespace vcsim::testing
