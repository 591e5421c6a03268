#ifndef QREV_TOOLS_CLI_HPP
#define QREV_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace qrev::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kCheckFailed = 2 };

/// Runs one qrev command. `args` excludes the program name. The report goes to
/// `out`, diagnostics and help text to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qrev::cli

#endif  // QREV_TOOLS_CLI_HPP
