#pragma once

#include <string>
#include <vector>

namespace fbp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

constexpr int criterion_count = 14;

std::string criterion_name(int id);

/// Runs one numbered criterion (1..criterion_count). Exceptions are reported as FAIL.
CriterionResult run_criterion(int id);

/// "PASS 01 name (1.23 s): detail"
std::string format_result(const CriterionResult& r);

/// Example 1 at a single A: free boundary within 2% of A - sqrt(3) above the
/// threshold, none below it.
CriterionResult reproduce_example1(double A, int nodes = 2049);
/// Example 2: solver (a, alpha) within 3% of the reduced-equation root.
CriterionResult reproduce_example2(double eps_weight, int nodes = 4097);
/// Example 3: the two-phase minimizer on (-A, A) takes negative values.
CriterionResult reproduce_example3(double A, int nodes = 2049);

}  // namespace fbp
