#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tinytnas::cli {

enum ExitCode : int {
  kOk = 0,
  kBadFlags = 2,
  kBadData = 3,
  kInternalFailure = 4,
};

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tinytnas::cli
