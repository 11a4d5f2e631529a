#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpcross::cli {

// Exit codes: 0 success, 1 input error, 2 mathematical negative result.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpcross::cli
