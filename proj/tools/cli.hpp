#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace torusact::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kParseError = 2,
  kIllegalOrbitSpace = 3,
  kProvedNegative = 4,
  kSearchExhausted = 5,
  kLibraryError = 6,
};

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace torusact::cli
