#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polya/mean_engine.hpp"
#include "polya/moments.hpp"
#include "polya/spectral.hpp"

namespace polya {

// ---------------------------------------------------------------------------
// Pathwise centring checks
// ---------------------------------------------------------------------------

/// max over paths and checkpoints of |a . (X_n - E X_n)| / w_n.
double activity_centring_residual(const std::vector<Trajectory>& batch, const std::vector<Eigen::VectorXd>& means,
                                  const Eigen::VectorXd& activities, const WeightSchedule& w);

/// max over paths and checkpoints of |P (X_n - E X_n)| / w_n.
double projection_centring_residual(const std::vector<Trajectory>& batch, const std::vector<Eigen::VectorXd>& means,
                                    const Eigen::MatrixXcd& projection, const WeightSchedule& w);

// ---------------------------------------------------------------------------
// Covariance stabilization for small and critical urns
// ---------------------------------------------------------------------------

struct CovarianceVerdict {
  bool pass = false;
  double relative_change = 0.0;  // ||C_last - C_prev|| / ||C_last|| of the normalized covariances
  double noise_allowance = 0.0;  // 3 combined standard errors on the same relative scale
  long n_last = 0;
  long n_prev = 0;
  Eigen::MatrixXd normalized_last;
  std::optional<double> max_reference_z;  // max |C_last - Sigma| / SE when a reference is given
};

/// Cov[X_n] / n (small) or Cov[X_n] / (n (log n)^(2 nu2 + 1)) (critical) must
/// change by at most `tolerance` (plus 3 standard errors) between the last
/// checkpoint and the last one a decade earlier; with report.reference_sigma set, every entry must also
/// sit within 3 standard errors of it. Throws PreconditionError for large or
/// degenerate classifications or a report without covariances.
CovarianceVerdict theorem_t3_check(const MomentReport& report, const UrnClassification& classification,
                                   double tolerance = 0.10);

// ---------------------------------------------------------------------------
// Square-function inequality
// ---------------------------------------------------------------------------

/// Replicates of the martingale X_n = sum_i A_i Y_i together with its square
/// function S_n = (sum_i |A_i Y_i|^2)^(1/2).
struct MartingaleSample {
  std::vector<Eigen::VectorXcd> terminal;
  std::vector<double> square_function;
  double weight_square_sum = 0.0;  // sum_i ||A_i||^2
  // For each recorded order p: E|Y_i|^p estimated per index i.
  std::map<double, std::vector<double>> increment_power_means;
};

struct BurkholderVerdict {
  double p = 2.0;
  double martingale_norm = 0.0;  // ||X_n||_p
  double martingale_se = 0.0;
  double square_norm = 0.0;      // ||S_n(X)||_p
  double square_se = 0.0;
  double margin_z = 0.0;         // ((p-1)||S||_p - ||X||_p) / combined SE
  bool burkholder_pass = false;  // ||X||_p <= (p-1)||S||_p + 4 SE
  double sup_increment_norm = 0.0;  // sup_i ||Y_i||_p
  double empirical_cp = 0.0;        // ||X||_p / ((sum ||A_i||^2)^(1/2) sup ||Y_i||_p)
  bool ll2_pass = false;            // empirical_cp <= p - 1 within 4 SE

  bool pass() const { return burkholder_pass && ll2_pass; }
};

/// Needs p >= 2, sum ||A_i||^2 <= 1 and increment moments recorded for p.
BurkholderVerdict burkholder_check(const MartingaleSample& sample, double p, const BootstrapOptions& options = {});

/// Fair +-1 coin flips with weights A_i = n^(-1/2), so sum ||A_i||^2 = 1.
MartingaleSample coin_flip_martingale(long n, std::size_t replicates, std::uint64_t seed,
                                      const std::vector<double>& orders);

/// Urn martingale differences Y_1..Y_n from simulated paths, weighted by
/// `weights[i-1]` = A_i. Replicates are reduced in fixed blocks so the result
/// does not depend on `workers`.
MartingaleSample urn_martingale(const UrnSpec& spec, const std::vector<Eigen::MatrixXcd>& weights,
                                std::size_t replicates, std::uint64_t seed, const std::vector<double>& orders,
                                unsigned workers = 0);

/// A_i = P F_{i,n} / (sum_l ||P F_{l,n}||^2)^(1/2), i = 1..n.
std::vector<Eigen::MatrixXcd> normalized_product_weights(const ProductChain& chain, const Eigen::MatrixXcd& projection,
                                                         long n);

}  // namespace polya
