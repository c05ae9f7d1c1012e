#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace schw {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Command-line entry point. `args` excludes the program name, e.g.
/// {"valence", "bound", "--C", "4.9348022"}. Reports go to `out` (or to
/// --output), diagnostics to `err`. Returns 0 when every check passes, 1 on
/// a failed check or numerical failure, 2 on a usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace schw
