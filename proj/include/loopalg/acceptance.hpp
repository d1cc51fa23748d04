#pragma once

#include <string>
#include <vector>

namespace loopalg {

struct CriterionResult {
  int number = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;  // worst deviation or failure description
};

// The acceptance criteria, each pinned to its stated tolerance and runtime
// budget. Suite names: fdiag, fourier, appendixB, projector, jordan,
// predicted, potts, boundary, oracle; "all" runs everything.
std::vector<CriterionResult> run_acceptance(const std::string& suite = "all");

// One "[PASS]/[FAIL] k. name (t s) detail" line per criterion.
void print_acceptance(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace loopalg
