#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace upconv::cli {

/// Exit codes: 0 success, 1 domain/solver/config error, 2 usage error.
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace upconv::cli
