#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rk::selfcheck {

/// One end-to-end check of the library's contracts, runnable from the CLI
/// (`rk selftest`) and from the acceptance test binary.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Run criteria 1..10. When live is nonnull, one pass/fail line is printed
/// per criterion as it finishes.
std::vector<CriterionResult> run_all(uint64_t seed, std::ostream* live = nullptr);

CriterionResult run_one(int id, uint64_t seed);

}  // namespace rk::selfcheck
