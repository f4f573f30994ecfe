#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stq::cli {

/// Runs the command line `args` (without the program name). Returns the
/// process exit code: 0 success, 1 data or predicate failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace stq::cli
