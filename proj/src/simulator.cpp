#include "polya/simulator.hpp"

#include <cmath>
#include <sstream>

#include "polya/errors.hpp"
#include "polya/parallel.hpp"

namespace polya {

namespace {

// Flattened replacement laws for the inner loop.
class Sampler {
 public:
  explicit Sampler(const UrnSpec& spec) : q_(spec.colours()), activities_(spec.activities) {
    for (const auto& law : spec.replacements) {
      Law flat;
      double acc = 0.0;
      for (const auto& atom : law.atoms) {
        acc += atom.probability;
        flat.cumulative.push_back(acc);
        flat.vectors.push_back(atom.vector);
      }
      laws_.push_back(std::move(flat));
    }
  }

  double total_activity(const Eigen::VectorXd& x) const { return activities_.dot(x); }

  int draw_colour(const Eigen::VectorXd& x, double total, StreamRng& rng) const {
    const double target = rng.uniform() * total;
    double acc = 0.0;
    int last = -1;
    for (Eigen::Index j = 0; j < q_; ++j) {
      const double weight = activities_[j] * x[j];
      if (weight <= 0.0) continue;
      acc += weight;
      last = static_cast<int>(j);
      if (target < acc) return last;
    }
    return last;
  }

  const Eigen::VectorXd& draw_atom(int colour, StreamRng& rng) const {
    const Law& law = laws_[static_cast<std::size_t>(colour)];
    if (law.vectors.size() == 1) return law.vectors.front();
    const double u = rng.uniform() * law.cumulative.back();
    for (std::size_t k = 0; k + 1 < law.vectors.size(); ++k)
      if (u < law.cumulative[k]) return law.vectors[k];
    return law.vectors.back();
  }

 private:
  struct Law {
    std::vector<double> cumulative;
    std::vector<Eigen::VectorXd> vectors;
  };
  Eigen::Index q_;
  Eigen::VectorXd activities_;
  std::vector<Law> laws_;
};

}  // namespace

std::vector<long> checkpoint_grid(long n_max, double ratio) {
  if (!(ratio > 1.0)) throw PreconditionError("checkpoint ratio must exceed 1");
  std::vector<long> grid;
  if (n_max < 1) return grid;
  double x = 1.0;
  long last = 0;
  while (true) {
    const long n = static_cast<long>(std::ceil(x - 1e-9));
    if (n >= n_max) break;
    if (n > last) {
      grid.push_back(n);
      last = n;
    }
    x *= ratio;
  }
  grid.push_back(n_max);
  return grid;
}

StepOutcome step(const Eigen::VectorXd& state, const UrnSpec& spec, StreamRng& rng) {
  const Sampler sampler(spec);
  const double total = sampler.total_activity(state);
  if (!(total > 0.0)) throw TenabilityError("step: zero total activity");
  StepOutcome out;
  out.colour = sampler.draw_colour(state, total, rng);
  out.replacement = sampler.draw_atom(out.colour, rng);
  out.state = state + out.replacement;
  return out;
}

Trajectory run_path(const UrnSpec& spec, long n_max, const StreamKey& key, const RunOptions& options) {
  if (n_max < 0) throw PreconditionError("run_path: n_max must be nonnegative");
  const bool balanced = check_balanced(spec).balanced;
  if (!balanced && !options.allow_unbalanced)
    throw NotBalanced("run_path: urn is not balanced; pass allow_unbalanced to simulate it anyway");

  const Sampler sampler(spec);
  const auto grid = checkpoint_grid(n_max, options.checkpoint_ratio);
  const Eigen::MatrixXd A = options.record.increments ? intensity_matrix(spec) : Eigen::MatrixXd();

  Trajectory t;
  t.key = key;
  t.initial = spec.initial;
  t.checkpoints.reserve(options.record.every_step ? static_cast<std::size_t>(n_max) : grid.size());
  if (options.record.drawn) t.drawn.reserve(static_cast<std::size_t>(n_max));
  if (options.record.increments) t.increments.reserve(static_cast<std::size_t>(n_max));

  StreamRng rng(key);
  Eigen::VectorXd x = spec.initial;
  std::size_t next_checkpoint = 0;
  const Eigen::Index q = spec.colours();
  for (long n = 0; n < n_max; ++n) {
    const double total = sampler.total_activity(x);
    if (!(total > 0.0)) {
      t.tenability_ok = false;
      std::ostringstream os;
      os << "zero total activity before draw " << n + 1;
      t.diagnostic = os.str();
      break;
    }
    const int colour = sampler.draw_colour(x, total, rng);
    const Eigen::VectorXd& atom = sampler.draw_atom(colour, rng);
    if (options.record.increments) t.increments.push_back(atom - A * x / total);
    if (options.record.drawn) t.drawn.push_back(colour);
    x += atom;
    t.steps = n + 1;

    for (Eigen::Index i = 0; i < q; ++i) {
      if (x[i] >= 0.0) continue;
      if (x[i] >= -kTenabilityTolerance) {
        x[i] = 0.0;
        continue;
      }
      t.tenability_ok = false;
      std::ostringstream os;
      os << "negative count " << x[i] << " of colour " << i + 1 << " after draw " << n + 1 << " (colour "
         << colour + 1 << ")";
      t.diagnostic = os.str();
      break;
    }
    if (!t.tenability_ok) break;
    if (options.record.every_step) {
      t.checkpoints.push_back(Checkpoint{n + 1, x});
    } else if (next_checkpoint < grid.size() && grid[next_checkpoint] == n + 1) {
      t.checkpoints.push_back(Checkpoint{n + 1, x});
      ++next_checkpoint;
    }
  }
  return t;
}

std::vector<Trajectory> run_batch(const UrnSpec& spec, long n_max, std::size_t replicates, std::uint64_t master_seed,
                                  const RunOptions& options, unsigned workers) {
  if (replicates < 1) throw PreconditionError("run_batch: need at least one replicate");
  if (!check_balanced(spec).balanced && !options.allow_unbalanced)
    throw NotBalanced("run_batch: urn is not balanced; pass allow_unbalanced to simulate it anyway");
  std::vector<Trajectory> batch(replicates);
  parallel_for(replicates, workers, [&](std::size_t r) {
    batch[r] = run_path(spec, n_max, StreamKey{master_seed, r, kSimulationStream}, options);
  });
  return batch;
}

double martingale_residual(const Trajectory& trajectory, const ProductChain& chain) {
  const long n = trajectory.steps;
  if (static_cast<long>(trajectory.increments.size()) != n)
    throw PreconditionError("martingale_residual: increments were not recorded");
  const Eigen::Index q = trajectory.initial.size();
  Eigen::MatrixXd G = Eigen::MatrixXd::Identity(q, q);  // F_{l,n}
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(q);
  for (long l = n; l >= 1; --l) {
    sum += G * trajectory.increments[static_cast<std::size_t>(l - 1)];
    G = (G * chain.factor(l - 1)).eval();
  }
  const Eigen::VectorXd& xn = trajectory.final_state();
  return (xn - G * trajectory.initial - sum).norm() / (1.0 + xn.norm());
}

double ConditionalMeanCheck::bound(double k) const {
  return samples == 0 ? std::numeric_limits<double>::infinity() : k * sigma / std::sqrt(static_cast<double>(samples));
}

namespace {

struct OneStepLaw {
  Eigen::VectorXd drift;  // A X / w
  double second_moment = 0.0;  // E|Delta X - drift|^2
  Eigen::VectorXd enumerated_mean;
};

OneStepLaw one_step_law(const UrnSpec& spec, const Eigen::VectorXd& state) {
  const double total = spec.activities.dot(state);
  if (!(total > 0.0)) throw TenabilityError("zero total activity");
  OneStepLaw law;
  law.drift = intensity_matrix(spec) * state / total;
  law.enumerated_mean = Eigen::VectorXd::Zero(state.size());
  for (Eigen::Index j = 0; j < state.size(); ++j) {
    const double pj = spec.activities[j] * state[j] / total;
    if (pj <= 0.0) continue;
    for (const auto& atom : spec.replacements[static_cast<std::size_t>(j)].atoms) {
      law.enumerated_mean += pj * atom.probability * atom.vector;
      law.second_moment += pj * atom.probability * (atom.vector - law.drift).squaredNorm();
    }
  }
  return law;
}

}  // namespace

ConditionalMeanCheck conditional_mean_check(const UrnSpec& spec, const Eigen::VectorXd& state, std::size_t samples,
                                            const StreamKey& key) {
  if (samples < 1000) throw PreconditionError("conditional_mean_check: need at least 1000 samples");
  const auto law = one_step_law(spec, state);
  const Sampler sampler(spec);
  const double total = sampler.total_activity(state);
  StreamRng rng(key);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(state.size());
  for (std::size_t m = 0; m < samples; ++m) sum += sampler.draw_atom(sampler.draw_colour(state, total, rng), rng);
  ConditionalMeanCheck check;
  check.deviation = (sum / static_cast<double>(samples) - law.drift).norm();
  check.sigma = std::sqrt(law.second_moment);
  check.samples = samples;
  return check;
}

double conditional_mean_exact(const UrnSpec& spec, const Eigen::VectorXd& state) {
  const auto law = one_step_law(spec, state);
  return (law.enumerated_mean - law.drift).norm();
}

}  // namespace polya
