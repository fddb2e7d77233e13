#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rip {

// Full command-line entry point, callable in-process for tests. `args` holds
// the arguments without the program name. Exit codes: 0 success, 1 the
// requested instance is infeasible, 2 usage or validation error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, const char* const* argv);

}  // namespace rip
