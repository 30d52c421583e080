#pragma once

#include <string>
#include <vector>

namespace homsense::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInternalError = 1,
    kUsageError = 2,
    kInputError = 3,
    kPreconditionError = 4,
    kVerificationFailure = 5,
};

/// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args);

} // namespace homsense::cli
