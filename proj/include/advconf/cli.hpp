#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace advconf {

inline constexpr const char* kVersion = "0.1.0";

// Runs one `advconf` invocation (arguments exclude the program name).
// Returns 0 on success, 2 on usage errors, 1 on runtime errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args);

}  // namespace advconf
