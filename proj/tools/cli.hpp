#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace adual::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kInputError = 2, kBudget = 3 };

/// Runs one `adual VERB ...` invocation; args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adual::cli
