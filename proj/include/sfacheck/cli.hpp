#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sfacheck {

/// Runs one command line (without the program name). Returns the exit code:
/// 0 = SAT (or success), 1 = UNSAT, 2 = error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sfacheck
