#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace emdcor {

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Seeded self-check of the library against its closed forms, bounds and
// Monte Carlo harnesses. Deterministic for a given seed.
std::vector<ValidationCheck> run_validation(std::uint64_t seed);

}  // namespace emdcor
