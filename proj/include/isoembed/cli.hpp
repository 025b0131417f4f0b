#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isoembed {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsageError = 2;

/// Runs the `embed` command. `args` excludes the program name. Diagnostics
/// and warnings go to `err`; the JSON report goes to `--out` or, if that is
/// absent, to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isoembed
