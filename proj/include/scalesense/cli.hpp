#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scalesense::cli {

enum ExitCode : int { kSuccess = 0, kDomainError = 1, kUsageError = 2 };

/// Runs one subcommand (analyze, simulate, sweep, refine-check,
/// counterexample). `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scalesense::cli
