#pragma once

#include <string>
#include <vector>

namespace nuwalk {

struct SuiteResult {
  std::string name;
  double measured{};
  double tolerance{};
  bool pass{};
};

// Runs every invariant suite with fixed seeds and returns one row per suite.
// measured is the worst defect observed; pass means measured <= tolerance.
std::vector<SuiteResult> run_validation_suites();

}  // namespace nuwalk
