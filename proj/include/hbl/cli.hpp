#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hbl::cli {

enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2, numerical_error = 3 };

/// Entry point shared by the `hbl` executable and the CLI tests.
/// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hbl::cli
