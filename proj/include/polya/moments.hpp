#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "polya/simulator.hpp"

namespace polya {

struct BootstrapOptions {
  int resamples = 200;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMinReplicates = 100;

struct MomentPoint {
  long n = 0;
  double estimate = 0.0;  // (mean_r |dev_r|^p)^(1/p)
  double std_error = 0.0;    // bootstrap
};

/// Monte Carlo estimates of ||X_n - E X_n||_p (or of a projection of it) on
/// the checkpoint grid, centred at the exact mean.
struct MomentReport {
  double p = 2.0;
  std::vector<MomentPoint> grid;
  // Cov[X_n] about the exact mean and the standard errors of its entries;
  // filled by mc_central_moment only.
  std::vector<Eigen::MatrixXd> covariance;
  std::vector<Eigen::MatrixXd> covariance_se;
  std::optional<Eigen::MatrixXd> reference_sigma;
};

/// Checkpoint n values shared by every trajectory of the batch. Throws
/// PreconditionError when paths disagree or any path lost tenability.
std::vector<long> batch_grid(const std::vector<Trajectory>& batch);

/// Magnitude of a deviation X_n - E X_n.
using DeviationNorm = std::function<double(const Eigen::VectorXd&)>;

/// Generic estimator: (mean over replicates of norm(X_n - E X_n)^p)^(1/p)
/// at each checkpoint, with bootstrap standard errors. `means[k]` is E X_n at
/// the k-th checkpoint. Refuses batches smaller than kMinReplicates.
MomentReport central_moment_series(const std::vector<Trajectory>& batch, const std::vector<Eigen::VectorXd>& means,
                                   double p, const DeviationNorm& norm, const BootstrapOptions& options = {});

/// Euclidean norm of the whole deviation; also fills the covariance fields.
MomentReport mc_central_moment(const std::vector<Trajectory>& batch, const std::vector<Eigen::VectorXd>& means,
                               double p, const BootstrapOptions& options = {});

/// Modulus of P_lambda (X_n - E X_n).
MomentReport projected_moment(const std::vector<Trajectory>& batch, const Eigen::MatrixXcd& projection,
                              const std::vector<Eigen::VectorXd>& means, double p, const BootstrapOptions& options = {});

/// |X_{n,i} - E X_{n,i}| for a single colour.
MomentReport component_moment(const std::vector<Trajectory>& batch, std::size_t component,
                              const std::vector<Eigen::VectorXd>& means, double p, const BootstrapOptions& options = {});

/// Bootstrap standard error of (mean v)^(1/p) for nonnegative samples v.
double bootstrap_power_mean_se(const std::vector<double>& values, double p, const StreamKey& key, int resamples);

}  // namespace polya
