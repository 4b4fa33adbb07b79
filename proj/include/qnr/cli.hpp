#ifndef QNR_CLI_HPP
#define QNR_CLI_HPP

// Command-line front end. Every command writes one JSON document
//   {"command", "inputs", "output", "diagnostics", "status"}
// to `out` (CSV for `radius`/`range` with --format csv).
//
// Exit codes: 0 success, 1 input or validation error, 2 optimizer did not
// converge or a self-test check failed (results are still printed).

#include <iosfwd>
#include <string>
#include <vector>

namespace qnr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNotConverged = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qnr::cli

#endif  // QNR_CLI_HPP
