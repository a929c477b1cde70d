#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wpgibbs::cli {

enum exit_code : int { ok = 0, verification_failed = 1, usage_error = 2, resource_cap = 3 };

/// Runs one command line. Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace wpgibbs::cli
