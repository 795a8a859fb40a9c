#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace genlasso::cli {

enum ExitCode : int {
  kOk = 0,
  /// The computation succeeded and found non-uniqueness, a violation or
  /// instability.
  kFinding = 1,
  kUsage = 2,
  kNumerical = 3,
};

/// Runs one subcommand. JSON goes to --out when given, else to `out`;
/// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);


}  // namespace genlasso::cli
