#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace resetfpt::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kValidation = 3,
    kComputation = 4,
};

/// Runs one command. `args` excludes the program name. The artifact goes to
/// `out` (or the --out path); diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace resetfpt::cli
