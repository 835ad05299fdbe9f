#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mpf::cli {

// Runs the `mpf` command line on `args` (program name excluded). Returns the
// process exit code: 0 success, 1 runtime failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpf::cli
