#ifndef MODALPD_CLI_HPP_
#define MODALPD_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace modalpd {

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitInternal = 2;

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modalpd

#endif  // MODALPD_CLI_HPP_
