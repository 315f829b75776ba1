#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pipescope::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericError = 3,
  kActionTimeExceedsTau = 4,
};

/// Entry point of the `pipescope` tool. `args[0]` is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pipescope::cli
