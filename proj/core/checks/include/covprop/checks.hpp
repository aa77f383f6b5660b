#pragma once

#include <string>
#include <vector>

namespace covprop {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Ids run by run_acceptance(), in order.
std::vector<int> acceptance_ids();

/// Runs one acceptance criterion at n = 200, lambda = 1. Throws
/// std::out_of_range for an unknown id.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_acceptance();

/// "PASS  3 exact-identities: ..." style line.
std::string format_result(const CriterionResult& result);

}  // namespace covprop
