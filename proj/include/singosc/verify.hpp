#pragma once

// The acceptance checks, runnable from the CLI and from the test suite.

#include <string>
#include <vector>

namespace singosc {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct VerifyOptions {
  std::vector<std::string> only;  ///< check names to run; empty runs all
  double tolerance_scale = 1.0;   ///< multiplies every upper-bound tolerance
};

/// closed_form, equidistance, ratio_identity, oracle_agreement, orthogonality,
/// normalization, perturbative, census, quantum_defect, representation,
/// special_functions, in this order.
const std::vector<std::string>& check_names();

/// Throws DomainError for an unknown name in options.only.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

/// "PASS  1 closed_form  <detail>  (0.01 s)"
std::string format_result(const CheckResult& r);

}  // namespace singosc
