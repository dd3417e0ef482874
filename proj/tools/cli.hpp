#pragma once

// Command-line front end for the rspin library: potential, verify, flat.

#include <iosfwd>
#include <string>
#include <vector>

namespace rspin::cli {

enum ExitCode { kPass = 0, kFailure = 1, kUsage = 2 };

/// Runs one command. `args` excludes the program name. Output is byte-identical
/// for identical arguments and environment.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rspin::cli
