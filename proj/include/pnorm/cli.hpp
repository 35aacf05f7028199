#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pnorm::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kInputError = 2,
  kCertificationFailure = 3,
};

/// Runs one workbench command. `args` excludes the program name. A JSON run
/// report goes to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pnorm::cli
