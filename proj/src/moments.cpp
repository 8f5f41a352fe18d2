#include "polya/moments.hpp"

#include <cmath>
#include <complex>

#include "polya/errors.hpp"

namespace polya {

std::vector<long> batch_grid(const std::vector<Trajectory>& batch) {
  if (batch.empty()) throw PreconditionError("empty batch");
  std::vector<long> grid;
  for (const auto& cp : batch.front().checkpoints) grid.push_back(cp.n);
  for (const auto& t : batch) {
    if (!t.tenability_ok) throw PreconditionError("batch contains a path that lost tenability: " + t.diagnostic);
    if (t.checkpoints.size() != grid.size()) throw PreconditionError("batch paths have different checkpoint grids");
    for (std::size_t k = 0; k < grid.size(); ++k)
      if (t.checkpoints[k].n != grid[k]) throw PreconditionError("batch paths have different checkpoint grids");
  }
  return grid;
}

double bootstrap_power_mean_se(const std::vector<double>& values, double p, const StreamKey& key, int resamples) {
  if (resamples < 2) return 0.0;
  StreamRng rng(key);
  const std::size_t R = values.size();
  double sum = 0.0, sum_sq = 0.0;
  for (int b = 0; b < resamples; ++b) {
    double acc = 0.0;
    for (std::size_t r = 0; r < R; ++r) acc += values[rng.below(R)];
    const double est = std::pow(acc / static_cast<double>(R), 1.0 / p);
    sum += est;
    sum_sq += est * est;
  }
  const double m = sum / resamples;
  return std::sqrt(std::max(0.0, (sum_sq - resamples * m * m) / (resamples - 1)));
}

MomentReport central_moment_series(const std::vector<Trajectory>& batch, const std::vector<Eigen::VectorXd>& means,
                                   double p, const DeviationNorm& norm, const BootstrapOptions& options) {
  if (!(p >= 1.0)) throw PreconditionError("moment order p must be >= 1");
  if (batch.size() < kMinReplicates)
    throw PreconditionError("moment estimation needs at least 100 replicates; got " + std::to_string(batch.size()));
  const auto grid = batch_grid(batch);
  if (means.size() != grid.size()) throw PreconditionError("mean series is not aligned with the checkpoint grid");

  MomentReport report;
  report.p = p;
  std::vector<double> values(batch.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double acc = 0.0;
    for (std::size_t r = 0; r < batch.size(); ++r) {
      values[r] = std::pow(norm(batch[r].checkpoints[k].state - means[k]), p);
      acc += values[r];
    }
    MomentPoint pt;
    pt.n = grid[k];
    pt.estimate = std::pow(acc / static_cast<double>(batch.size()), 1.0 / p);
    pt.std_error = bootstrap_power_mean_se(values, p, StreamKey{options.seed, k, kBootstrapStream}, options.resamples);
    report.grid.push_back(pt);
  }
  return report;
}

MomentReport mc_central_moment(const std::vector<Trajectory>& batch, const std::vector<Eigen::VectorXd>& means,
                               double p, const BootstrapOptions& options) {
  MomentReport report =
      central_moment_series(batch, means, p, [](const Eigen::VectorXd& d) { return d.norm(); }, options);
  const double R = static_cast<double>(batch.size());
  for (std::size_t k = 0; k < report.grid.size(); ++k) {
    const Eigen::Index q = means[k].size();
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(q, q), sum_sq = Eigen::MatrixXd::Zero(q, q);
    for (const auto& t : batch) {
      const Eigen::VectorXd d = t.checkpoints[k].state - means[k];
      const Eigen::MatrixXd outer = d * d.transpose();
      sum += outer;
      sum_sq += outer.cwiseAbs2();
    }
    const Eigen::MatrixXd cov = sum / R;
    const Eigen::MatrixXd var = ((sum_sq / R - cov.cwiseAbs2()) * (R / (R - 1.0))).cwiseMax(0.0);
    report.covariance.push_back(cov);
    report.covariance_se.push_back((var / R).cwiseSqrt());
  }
  return report;
}

MomentReport projected_moment(const std::vector<Trajectory>& batch, const Eigen::MatrixXcd& projection,
                              const std::vector<Eigen::VectorXd>& means, double p, const BootstrapOptions& options) {
  return central_moment_series(
      batch, means, p,
      [&projection](const Eigen::VectorXd& d) { return (projection * d.cast<std::complex<double>>()).norm(); },
      options);
}

MomentReport component_moment(const std::vector<Trajectory>& batch, std::size_t component,
                              const std::vector<Eigen::VectorXd>& means, double p, const BootstrapOptions& options) {
  const auto i = static_cast<Eigen::Index>(component);
  return central_moment_series(
      batch, means, p, [i](const Eigen::VectorXd& d) { return std::abs(d[i]); }, options);
}

}  // namespace polya
