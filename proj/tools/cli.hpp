#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace singosc::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kRegime = 2,
  kSolver = 3,
  kVerifyFailed = 4,
};

/// Runs one command line (without the program name). Tables and reports go
/// to `out` unless --out names a directory; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fixed float format of every emitted number: 17 significant digits,
/// scientific notation; "inf", "-inf", "nan" for the non-finite values.
std::string format_number(double x);

}  // namespace singosc::cli
