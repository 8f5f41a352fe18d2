#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace polya::cli {

/// Resolved settings of one invocation. Everything except `workers` and
/// `out` is echoed in the banner of every CSV.
struct RunConfig {
  std::string subcommand;
  std::string spec_path;
  long n_max = 16384;
  std::size_t replicates = 10000;
  std::uint64_t seed = 1;
  double checkpoint_ratio = 2.0;
  std::vector<double> orders{2.0};
  double tolerance = 0.05;  // slack on fitted exponents
  long fit_min = 128;       // smallest n used in growth fits
  bool allow_unbalanced = false;
  bool record_increments = false;
  unsigned workers = 0;  // 0 = hardware concurrency; never changes output
  std::string out;       // empty = standard output
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdictFailure = 1;
inline constexpr int kExitInputError = 2;

/// Runs one command line (args excludes the program name). Output goes to
/// `out` unless --out names a file; diagnostics and usage go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polya::cli
