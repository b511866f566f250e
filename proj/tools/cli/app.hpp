#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace beltrami::cli {

// Parses the arguments (without the program name), runs the subcommand and
// maps failures onto the documented exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace beltrami::cli
