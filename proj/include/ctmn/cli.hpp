#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctmn::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,
  kInputError = 2,
  kResourceCap = 3,
};

/// Entry point shared by the `ctmn` binary and the tests. `args` excludes the
/// program name. CSV goes to --output when given, else to `out`; diagnostics
/// go to `err`. Nothing is written to the output on failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctmn::cli
