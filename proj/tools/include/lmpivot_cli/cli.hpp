#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lmpivot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Runs one command. `args` excludes the program name. CSV goes to `out` unless
/// --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lmpivot::cli
