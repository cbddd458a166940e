#pragma once

#include <string>
#include <vector>

namespace qball::cli {

/// Full command-line front end. Exit codes: 0 success, 2 config error,
/// 3 non-convergence under --strict, 4 numerical instability, 5 I/O error.
int run_main(int argc, char** argv);
int run_main(const std::vector<std::string>& args);

/// One-command recipes reproducing the figure data sets.
std::string figure_scripts();

}  // namespace qball::cli
