#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gkpr::cli {

/// Runs the command line (without the program name). Returns the process
/// exit code: 0 success, 1 domain error or failed validation, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gkpr::cli
