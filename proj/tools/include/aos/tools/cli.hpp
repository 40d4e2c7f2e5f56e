#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aos::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kIo = 3,
    kConfig = 4,
};

/// Runs the `aos` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aos::cli
