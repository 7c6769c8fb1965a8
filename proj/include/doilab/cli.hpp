#ifndef DOILAB_CLI_HPP
#define DOILAB_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace doilab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAssertion = 2;

/// Entry point behind the `doilab` binary. Reports go to `out` (or to
/// --out, written atomically); one machine-parsable line goes to `err` on
/// failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace doilab::cli

#endif  // DOILAB_CLI_HPP
