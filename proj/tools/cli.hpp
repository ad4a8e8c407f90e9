#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mutwalk::cli {

// Parses and executes one command line (argv without the program name),
// writing the chosen format to out and diagnostics to err.  Returns the
// process exit code: 0 on success, 1 on usage or domain errors, 2 on
// numerical failures (non-convergence, singular systems, censoring).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace mutwalk::cli
