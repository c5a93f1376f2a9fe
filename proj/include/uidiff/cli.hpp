#pragma once

#include <string>
#include <vector>

namespace uidiff::cli {

/// Exit statuses of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv and dispatches the subcommand (diff, generate, eval, sweep).
/// Usage and validation errors return kExitUsage; IO failures return kExitFailure.
int run(int argc, const char* const* argv);
/// Same as above; `args` excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace uidiff::cli
