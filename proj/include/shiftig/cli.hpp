#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shiftig {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDegenerate = 2;

// Runs one CLI invocation. args excludes the program name. Errors are
// reported on `err` as a single JSON object {"error": <name>, "message": ...}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shiftig
