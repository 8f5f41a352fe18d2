#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polya/spectral.hpp"
#include "polya/urn.hpp"

namespace polya {

/// I + A / w_k.
template <typename Derived>
typename Derived::PlainObject transition_factor(const Eigen::MatrixBase<Derived>& A, const WeightSchedule& w, long k) {
  using Plain = typename Derived::PlainObject;
  return Plain::Identity(A.rows(), A.cols()) + A / w(k);
}

Eigen::MatrixXd transition_factor(const UrnSpec& spec, long k);

/// The deterministic products F_{i,j} = (I + A/w_{j-1}) ... (I + A/w_i).
///
/// F_{0,n} is cached on every n requested through from_origin(), so that a
/// monotone grid of queries costs one factor per step overall. The cache is
/// single-writer: concurrent readers must not call from_origin() while a
/// writer extends it.
class ProductChain {
 public:
  ProductChain(Eigen::MatrixXd A, WeightSchedule w);
  explicit ProductChain(const UrnSpec& spec);

  const Eigen::MatrixXd& intensity() const { return A_; }
  const WeightSchedule& weights() const { return w_; }

  Eigen::MatrixXd factor(long k) const { return transition_factor(A_, w_, k); }

  /// F_{i,j}; the empty product F_{i,i} is the identity.
  Eigen::MatrixXd product(long i, long j) const;

  /// Cached F_{0,n}.
  const Eigen::MatrixXd& from_origin(long n);

 private:
  Eigen::MatrixXd A_;
  WeightSchedule w_;
  std::map<long, Eigen::MatrixXd> cache_;
};

/// E X_n = F_{0,n} X_0. Throws NumericalError if a . E X_n drifts from w_n by
/// more than 1e-10 relative.
Eigen::VectorXd exact_mean(const UrnSpec& spec, long n);
Eigen::VectorXd exact_mean(ProductChain& chain, const Eigen::VectorXd& x0, long n);

/// E X_n at each n of `grid` (ascending).
std::vector<Eigen::VectorXd> mean_series(ProductChain& chain, const Eigen::VectorXd& x0, const std::vector<long>& grid);

/// ||P_lambda F_{i,j}||_2.
double projected_product_norm(const Eigen::MatrixXcd& P, const ProductChain& chain, long i, long j);

/// sum_{i=1}^{n} ||P_lambda F_{i,n}||_2^2, accumulated backwards so the cost
/// is O(n) small matrix products.
double lsoff_sum(const Eigen::MatrixXcd& P, const ProductChain& chain, long n);

/// Exponent and log-power of the bound on ||P_lambda F_{i,j}|| in terms of j/i.
struct ProductBound {
  double exponent = 0.0;  // Re lambda / b
  int log_power = 0;      // nu_lambda
};

ProductBound lsof_bound(const SpectralComponent& component, double b);

/// Growth of sum_i ||P_lambda F_{i,n}||^2 as C n^exponent (log n)^log_power.
struct SumBound {
  double exponent = 1.0;
  int log_power = 0;
};

SumBound lsoff_bound(const SpectralComponent& component, double b);

struct BoundVerdict {
  Complex lambda;
  double exponent_theoretical = 0.0;
  int log_power_theoretical = 0;
  double exponent_fitted = 0.0;
  double constant_estimate = 0.0;  // max over the grid of observed / bound shape
  double constant_spread = 0.0;    // max / min of that ratio
  bool pass = false;
};

struct LsofOptions {
  double slope_tolerance = 0.05;
  double max_constant_spread = 10.0;
  // Fit with this log power instead of nu_lambda (0 reproduces a fit that
  // ignores the Jordan correction).
  std::optional<int> log_power_override;
};

/// Grid of (i, j) pairs: i in {i0, 2 i0, 4 i0}, j / i in {1, 2, ..., 2^max_doublings}.
std::vector<std::pair<long, long>> lsof_grid(long i0, int max_doublings = 8);

/// Smallest i with w_i >= 2 |lambda| (and i >= 1).
long lsof_start(const ProductChain& chain, Complex lambda);

/// Fits log ||P F_{i,j}|| - nu log(1 + log(j/i)) = s log(j/i) + c over the grid;
/// passes when s <= Re lambda / b + tolerance and the implied constant is
/// stable over the grid. Throws PreconditionError if j/i spans < 2 decades.
BoundVerdict verify_lsof(const SpectralComponent& component, const ProductChain& chain,
                         const std::vector<std::pair<long, long>>& grid, const LsofOptions& options = {});

/// Powers of two 2^lo .. 2^hi.
std::vector<long> lsoff_grid(int lo = 7, int hi = 14);

/// Fits log sum_i ||P F_{i,n}||^2 - beta log log n = s log n + c over `ns`
/// with beta the log power of the matching case; passes when
/// |s - exponent| <= tolerance. exponent_fitted holds s and
/// constant_estimate / constant_spread describe sum / (n^exponent log^beta n).
/// Needs >= 5 points over >= 2 decades.
BoundVerdict verify_lsoff(const SpectralComponent& component, const ProductChain& chain, const std::vector<long>& ns,
                          double tolerance = 0.05);

}  // namespace polya
