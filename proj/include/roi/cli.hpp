// Command-line front end. Lives in the library so tests can drive it
// in-process; tools/roiacc.cpp only forwards argv.

#ifndef ROI_CLI_HPP
#define ROI_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace roi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name. Numbers go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace roi::cli

#endif // ROI_CLI_HPP
