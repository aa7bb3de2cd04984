#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace grasp::cli {

enum ExitCode : int
{
    exit_ok = 0,
    exit_usage = 2,
    exit_data = 3,
    exit_numerical = 4,
};

/// Runs one `grasp` command line. `args` excludes the program name.
/// Failures print a single line `error: <kind>: <message>` to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace grasp::cli
