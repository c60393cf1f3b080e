#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace carousel::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kNumerical = 2,
    kValidation = 3,
};

/// Runs the command line given without the program name. Primary output goes
/// to `out` unless --out names a file; errors are JSON records on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "3", "1..10" or "2,3,5" into a list of positive sizes.
std::vector<int> parse_size_list(const std::string& text);

/// %.12g, or "nan"/"inf" spelled the C way.
std::string format_number(double x);

}  // namespace carousel::cli
