#pragma once

#include <string>
#include <vector>

namespace tagnet::cli {

// Runs one pipeline subcommand. Exit status: 0 success, 1 validation error
// (bad flags or arguments), 2 data error (unreadable or inconsistent input).
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without the program name

} // namespace tagnet::cli
