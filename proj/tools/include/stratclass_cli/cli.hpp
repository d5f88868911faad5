#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stratclass::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kBudget = 3 };

/// Runs one command line (argv[0] excluded) and returns its exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stratclass::cli
