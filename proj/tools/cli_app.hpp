#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ncp {

// Parses command-line arguments (without the program name) and runs the
// command. Returns the process exit code.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ncp
