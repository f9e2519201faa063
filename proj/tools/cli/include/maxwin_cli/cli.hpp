#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace maxwin::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kDomain = 3,
  kIo = 4,
};

/// Malformed flag value (grid syntax, group spec, seed).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "a,b,c" or "lo:hi[:count]" (count log-spaced points, default 12).
std::vector<double> parse_grid(std::string_view text);

/// parse_grid rounded to integers >= 1 with duplicates removed, order kept.
std::vector<double> parse_size_grid(std::string_view text);

/// Seed used when --seed is absent: $MAXWIN_SEED or 20260221.
std::uint64_t default_seed();

/// Runs one command line (without the program name). Output goes to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maxwin::cli
