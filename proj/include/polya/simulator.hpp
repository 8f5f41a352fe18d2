#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polya/mean_engine.hpp"
#include "polya/rng.hpp"
#include "polya/urn.hpp"

namespace polya {

inline constexpr double kTenabilityTolerance = 1e-9;

struct RecordFlags {
  bool drawn = false;       // colour I_n of every draw
  bool increments = false;  // martingale differences Y_n
  bool every_step = false;  // checkpoint after every draw instead of the geometric grid
};

struct RunOptions {
  double checkpoint_ratio = 2.0;
  RecordFlags record;
  bool allow_unbalanced = false;
};

struct Checkpoint {
  long n = 0;
  Eigen::VectorXd state;
};

struct Trajectory {
  StreamKey key;
  Eigen::VectorXd initial;
  std::vector<Checkpoint> checkpoints;
  std::vector<int> drawn;                    // drawn[n-1] = I_n (0-based colour)
  std::vector<Eigen::VectorXd> increments;   // increments[n-1] = Y_n
  bool tenability_ok = true;
  long steps = 0;
  std::string diagnostic;

  const Eigen::VectorXd& final_state() const { return checkpoints.empty() ? initial : checkpoints.back().state; }
};

/// 1, ceil(ratio), ... (strictly increasing) up to and including n_max.
std::vector<long> checkpoint_grid(long n_max, double ratio = 2.0);

struct StepOutcome {
  Eigen::VectorXd state;
  int colour = 0;
  Eigen::VectorXd replacement;
};

/// One draw: colour j with probability a_j X_j / (a . X), then an atom of
/// xi_j. Throws TenabilityError when a . X <= 0.
StepOutcome step(const Eigen::VectorXd& state, const UrnSpec& spec, StreamRng& rng);

/// Simulates n_max draws. Unbalanced specs need options.allow_unbalanced
/// (NotBalanced otherwise). Leaving the tenable region does not throw: the
/// trajectory is marked and stops at that step.
Trajectory run_path(const UrnSpec& spec, long n_max, const StreamKey& key, const RunOptions& options = {});

/// R independent paths keyed (master_seed, r). The result does not depend on
/// `workers` (0 = hardware concurrency).
std::vector<Trajectory> run_batch(const UrnSpec& spec, long n_max, std::size_t replicates, std::uint64_t master_seed,
                                  const RunOptions& options = {}, unsigned workers = 0);

/// ||X_n - F_{0,n} X_0 - sum_l F_{l,n} Y_l|| / (1 + ||X_n||) at the final step.
double martingale_residual(const Trajectory& trajectory, const ProductChain& chain);

struct ConditionalMeanCheck {
  double deviation = 0.0;  // || sample mean of Delta X - A X / w ||
  double sigma = 0.0;      // sqrt(E|Delta X - A X / w|^2), exact
  std::size_t samples = 0;

  double bound(double k = 5.0) const;
};

/// Samples `samples` one-step replacements from the fixed state.
ConditionalMeanCheck conditional_mean_check(const UrnSpec& spec, const Eigen::VectorXd& state, std::size_t samples,
                                            const StreamKey& key);

/// Same deviation computed by enumerating colours and atoms.
double conditional_mean_exact(const UrnSpec& spec, const Eigen::VectorXd& state);

}  // namespace polya
