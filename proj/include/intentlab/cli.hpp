#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace intentlab::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2 };

/// Runs one CLI invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a,b,c" or "start:stop:step" (inclusive). Throws ValidationError.
std::vector<double> parse_values(const std::string& text);

}  // namespace intentlab::cli
