#ifndef EPIBATCH_CLI_HPP
#define EPIBATCH_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace epibatch {

// Runs the command line given argv-style arguments (excluding the program
// name). Exit codes: 0 success, 1 usage error, 2 data/validation error,
// 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace epibatch

#endif
