#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cogmux::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kRuntimeError = 3, kValidationFailure = 4 };

/// "MIN:MAX:STEP" -> MIN, MIN+STEP, ... up to MAX (inclusive within 1e-9 STEP).
std::vector<double> parse_grid(const std::string& spec);

/// Entry point used by main() and the tests; never calls exit().
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cogmux::cli
