#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace probefp::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 2,
    kNumericFailure = 3,
    kReducible = 4,
    kSwellAbort = 5,
    kUsage = 64,
};

// Runs the command line (args[0] is the program name) writing reports to
// `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace probefp::cli
