#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace circlelab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitAssertion = 3;

/// Runs one subcommand. `args` excludes the program name. With `--config
/// FILE` the command line is rebuilt from the config echoed in FILE (a JSON
/// or CSV artifact) and any remaining arguments are applied first.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Names accepted by `verify`.
std::vector<std::string> verify_suite_names();

}  // namespace circlelab::cli
