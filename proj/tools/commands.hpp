#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace judgekit::cli {

// Runs one CLI invocation. args[0] is the program name. Reports go to `out`
// (or --output), errors to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace judgekit::cli
