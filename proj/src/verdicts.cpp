#include "polya/verdicts.hpp"

#include <cmath>
#include <complex>

#include "polya/errors.hpp"
#include "polya/linalg.hpp"
#include "polya/parallel.hpp"

namespace polya {

double activity_centring_residual(const std::vector<Trajectory>& batch, const std::vector<Eigen::VectorXd>& means,
                                  const Eigen::VectorXd& activities, const WeightSchedule& w) {
  double worst = 0.0;
  for (const auto& t : batch)
    for (std::size_t k = 0; k < t.checkpoints.size() && k < means.size(); ++k) {
      const auto& cp = t.checkpoints[k];
      worst = std::max(worst, std::abs(activities.dot(cp.state - means[k])) / w(cp.n));
    }
  return worst;
}

double projection_centring_residual(const std::vector<Trajectory>& batch, const std::vector<Eigen::VectorXd>& means,
                                    const Eigen::MatrixXcd& projection, const WeightSchedule& w) {
  double worst = 0.0;
  for (const auto& t : batch)
    for (std::size_t k = 0; k < t.checkpoints.size() && k < means.size(); ++k) {
      const auto& cp = t.checkpoints[k];
      const Eigen::VectorXcd dev = (cp.state - means[k]).cast<std::complex<double>>();
      worst = std::max(worst, (projection * dev).norm() / w(cp.n));
    }
  return worst;
}

CovarianceVerdict theorem_t3_check(const MomentReport& report, const UrnClassification& classification,
                                   double tolerance) {
  if (classification.kind == UrnKind::large || classification.kind == UrnKind::degenerate)
    throw PreconditionError("theorem_t3_check: large/degenerate classification has no normal limit to check");
  if (report.covariance.size() != report.grid.size() || report.grid.size() < 2)
    throw PreconditionError("theorem_t3_check: report carries no covariance series");

  const double log_power = classification.kind == UrnKind::critical ? 2.0 * classification.nu2 + 1.0 : 0.0;
  auto normalizer = [&](long n) {
    const double x = static_cast<double>(n);
    return x * std::pow(std::log(x), log_power);
  };

  const std::size_t last = report.grid.size() - 1;
  const long n_last = report.grid[last].n;
  std::size_t prev = last;
  for (std::size_t k = 0; k < last; ++k)
    if (10 * report.grid[k].n <= n_last) prev = k;
  if (prev == last) throw PreconditionError("theorem_t3_check: grid does not span a decade");

  CovarianceVerdict v;
  v.n_last = n_last;
  v.n_prev = report.grid[prev].n;
  v.normalized_last = report.covariance[last] / normalizer(n_last);
  const Eigen::MatrixXd normalized_prev = report.covariance[prev] / normalizer(v.n_prev);
  const double change = (v.normalized_last - normalized_prev).norm();
  v.relative_change = change / v.normalized_last.norm();
  // Monte Carlo noise in both estimates, so small batches are not failed on noise alone.
  const double se_last = (report.covariance_se[last] / normalizer(n_last)).norm();
  const double se_prev = (report.covariance_se[prev] / normalizer(v.n_prev)).norm();
  v.noise_allowance = 3.0 * std::hypot(se_last, se_prev) / v.normalized_last.norm();
  v.pass = v.relative_change <= tolerance + v.noise_allowance;

  if (report.reference_sigma) {
    const Eigen::MatrixXd se = report.covariance_se[last] / normalizer(n_last);
    const Eigen::MatrixXd diff = (v.normalized_last - *report.reference_sigma).cwiseAbs();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < diff.rows(); ++i)
      for (Eigen::Index j = 0; j < diff.cols(); ++j)
        worst = std::max(worst, se(i, j) > 0.0 ? diff(i, j) / se(i, j) : (diff(i, j) > 0.0 ? INFINITY : 0.0));
    v.max_reference_z = worst;
    v.pass = v.pass && worst <= 3.0;
  }
  return v;
}

BurkholderVerdict burkholder_check(const MartingaleSample& sample, double p, const BootstrapOptions& options) {
  if (!(p >= 2.0)) throw PreconditionError("burkholder_check: need p >= 2");
  if (sample.weight_square_sum > 1.0 + 1e-9) throw PreconditionError("burkholder_check: need sum ||A_i||^2 <= 1");
  if (sample.terminal.size() < kMinReplicates) throw PreconditionError("burkholder_check: need at least 100 replicates");
  const auto moments = sample.increment_power_means.find(p);
  if (moments == sample.increment_power_means.end())
    throw PreconditionError("burkholder_check: increment moments were not recorded for this p");

  const std::size_t R = sample.terminal.size();
  std::vector<double> xs(R), ss(R);
  double sum_x = 0.0, sum_s = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    xs[r] = std::pow(sample.terminal[r].norm(), p);
    ss[r] = std::pow(sample.square_function[r], p);
    sum_x += xs[r];
    sum_s += ss[r];
  }
  BurkholderVerdict v;
  v.p = p;
  v.martingale_norm = std::pow(sum_x / static_cast<double>(R), 1.0 / p);
  v.square_norm = std::pow(sum_s / static_cast<double>(R), 1.0 / p);
  v.martingale_se = bootstrap_power_mean_se(xs, p, StreamKey{options.seed, 0, kBootstrapStream}, options.resamples);
  v.square_se = bootstrap_power_mean_se(ss, p, StreamKey{options.seed, 1, kBootstrapStream}, options.resamples);

  const double cp = p - 1.0;
  const double combined = std::hypot(v.martingale_se, cp * v.square_se);
  v.margin_z = combined > 0.0 ? (cp * v.square_norm - v.martingale_norm) / combined
                              : (cp * v.square_norm >= v.martingale_norm ? INFINITY : -INFINITY);
  v.burkholder_pass = v.martingale_norm <= cp * v.square_norm + 4.0 * combined;

  for (const double m : moments->second) v.sup_increment_norm = std::max(v.sup_increment_norm, std::pow(m, 1.0 / p));
  const double scale = std::sqrt(sample.weight_square_sum) * v.sup_increment_norm;
  v.empirical_cp = scale > 0.0 ? v.martingale_norm / scale : 0.0;
  v.ll2_pass = scale > 0.0 && v.martingale_norm <= cp * scale + 4.0 * v.martingale_se;
  return v;
}

MartingaleSample coin_flip_martingale(long n, std::size_t replicates, std::uint64_t seed,
                                      const std::vector<double>& orders) {
  if (n < 1) throw PreconditionError("coin_flip_martingale: need n >= 1");
  MartingaleSample s;
  const double weight = 1.0 / std::sqrt(static_cast<double>(n));
  s.weight_square_sum = static_cast<double>(n) * weight * weight;
  for (std::size_t r = 0; r < replicates; ++r) {
    StreamRng rng(StreamKey{seed, r, kSimulationStream});
    double x = 0.0;
    for (long i = 0; i < n; ++i) x += (rng.next() >> 63) ? weight : -weight;
    s.terminal.push_back(Eigen::VectorXcd::Constant(1, x));
    s.square_function.push_back(1.0);  // sum of n terms weight^2 * 1
  }
  for (const double p : orders) s.increment_power_means[p].assign(static_cast<std::size_t>(n), 1.0);
  return s;
}

MartingaleSample urn_martingale(const UrnSpec& spec, const std::vector<Eigen::MatrixXcd>& weights,
                                std::size_t replicates, std::uint64_t seed, const std::vector<double>& orders,
                                unsigned workers) {
  const long n = static_cast<long>(weights.size());
  if (n < 1) throw PreconditionError("urn_martingale: need at least one weight");

  MartingaleSample s;
  for (const auto& a : weights) {
    const double norm = operator_norm(a);
    s.weight_square_sum += norm * norm;
  }
  s.terminal.resize(replicates);
  s.square_function.resize(replicates);

  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (replicates + kBlock - 1) / kBlock;
  std::vector<std::vector<std::vector<double>>> block_sums(blocks);
  RunOptions options;
  options.record.increments = true;
  options.checkpoint_ratio = 2.0;

  parallel_for(blocks, workers, [&](std::size_t blk) {
    auto& sums = block_sums[blk];
    sums.assign(orders.size(), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    const std::size_t end = std::min(replicates, (blk + 1) * kBlock);
    for (std::size_t r = blk * kBlock; r < end; ++r) {
      const Trajectory t = run_path(spec, n, StreamKey{seed, r, kSimulationStream}, options);
      if (!t.tenability_ok) throw TenabilityError("urn_martingale: " + t.diagnostic);
      Eigen::VectorXcd x = Eigen::VectorXcd::Zero(spec.colours());
      double square = 0.0;
      for (long i = 0; i < n; ++i) {
        const Eigen::VectorXd& y = t.increments[static_cast<std::size_t>(i)];
        const Eigen::VectorXcd term = weights[static_cast<std::size_t>(i)] * y.cast<std::complex<double>>();
        x += term;
        square += term.squaredNorm();
        const double ny = y.norm();
        for (std::size_t o = 0; o < orders.size(); ++o) sums[o][static_cast<std::size_t>(i)] += std::pow(ny, orders[o]);
      }
      s.terminal[r] = x;
      s.square_function[r] = std::sqrt(square);
    }
  });

  for (std::size_t o = 0; o < orders.size(); ++o) {
    std::vector<double> total(static_cast<std::size_t>(n), 0.0);
    for (const auto& sums : block_sums)
      for (std::size_t i = 0; i < total.size(); ++i) total[i] += sums[o][i];
    for (auto& v : total) v /= static_cast<double>(replicates);
    s.increment_power_means[orders[o]] = std::move(total);
  }
  return s;
}

std::vector<Eigen::MatrixXcd> normalized_product_weights(const ProductChain& chain, const Eigen::MatrixXcd& projection,
                                                         long n) {
  std::vector<Eigen::MatrixXcd> weights(static_cast<std::size_t>(n));
  Eigen::MatrixXcd H = projection;  // P F_{i,n}
  double total = 0.0;
  for (long i = n; i >= 1; --i) {
    if (i < n) H = (H * chain.factor(i).cast<std::complex<double>>()).eval();
    weights[static_cast<std::size_t>(i - 1)] = H;
    const double norm = operator_norm(H);
    total += norm * norm;
  }
  const double scale = 1.0 / std::sqrt(total);
  for (auto& w : weights) w *= scale;
  return weights;
}

}  // namespace polya
