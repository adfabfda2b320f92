#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vcsim::testing {

struct ProcurementFuzzReport {
  std::uint64_t operations = 0;
  std::uint64_t rejected_calls = 0;
  std::uint64_t booked = 0;
  std::vector<std::string> problems;

  bool ok() const noexcept { return problems.empty(); }
};

// Drives one store through a random interleaving of operations on several
// documents, comparing every outcome with a reference model of the stage
// chain. Failed calls must leave the store and stock hashes untouched.
ProcurementFuzzReport fuzz_procurement(std::uint64_t seed, int steps = 60);

}  // namespace vcsim::testing
