#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace modq::cli {

// Runs one CLI command (args exclude the program name) writing results to
// `out` and diagnostics to `err`. Returns the process exit status:
// 0 success, 2 usage error, 3 domain error (e.g. unstable parameters).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modq::cli
