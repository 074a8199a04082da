// Command-line front end.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace minflow::cli {

enum ExitCode : int { ok = 0, check_failed = 1, usage_error = 2 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace minflow::cli
