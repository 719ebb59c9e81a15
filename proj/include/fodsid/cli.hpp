#ifndef FODSID_CLI_HPP
#define FODSID_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fodsid {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitDegenerate = 4,
};

/// Entry point of the `fodsid` executable. `args` excludes the program name.
/// Diagnostics, including the machine-readable error object, go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Applies FODSID_LOG (error, warn, info, debug) to the default stderr logger.
void configure_logging();

}  // namespace fodsid

#endif  // FODSID_CLI_HPP
