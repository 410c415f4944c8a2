#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctxmatch::cli {

enum ExitCode : int {
  kOk = 0,
  kPropertyFailure = 1,
  kBadArguments = 2,
  kCapExceeded = 3,
  kIoFailure = 4,
};

// Runs one command line (args excludes the program name). Results go to `out`
// unless --out names a file; the resolved configuration and diagnostics go to
// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctxmatch::cli
