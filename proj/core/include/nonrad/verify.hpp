#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nonrad {

// One acceptance criterion, measured at its pinned tolerance.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyOptions {
  // fast trims free numerical parameters (horizon, tolerance, r_max); the
  // criterion thresholds themselves never change.
  bool fast = false;
  unsigned seed = 1234;
};

std::vector<CriterionResult> run_linear_suite(const VerifyOptions& opt = {});
std::vector<CriterionResult> run_fixpoint_suite(const VerifyOptions& opt = {});
std::vector<CriterionResult> run_dynamics_suite(const VerifyOptions& opt = {});
std::vector<CriterionResult> run_suite(const std::string& name, const VerifyOptions& opt = {});

void print_results(std::ostream& os, const std::vector<CriterionResult>& results);
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace nonrad
