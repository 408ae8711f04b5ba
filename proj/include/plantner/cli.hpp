#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plantner {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 1 data or validation failure, 2 usage error.
// `args` excludes the program name. Machine-readable output goes to `out`,
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plantner
