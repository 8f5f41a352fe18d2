#include "polya/mean_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "polya/errors.hpp"
#include "polya/linalg.hpp"

namespace polya {

Eigen::MatrixXd transition_factor(const UrnSpec& spec, long k) {
  return transition_factor(intensity_matrix(spec), weight_schedule(spec), k);
}

ProductChain::ProductChain(Eigen::MatrixXd A, WeightSchedule w) : A_(std::move(A)), w_(w) {
  if (!(w_.b > 0.0) || !(w_.w0 > 0.0)) throw PreconditionError("ProductChain: need w0 > 0 and b > 0");
  cache_.emplace(0, Eigen::MatrixXd::Identity(A_.rows(), A_.cols()));
}

ProductChain::ProductChain(const UrnSpec& spec) : ProductChain(intensity_matrix(spec), weight_schedule(spec)) {}

Eigen::MatrixXd ProductChain::product(long i, long j) const {
  if (i < 0 || j < i) throw PreconditionError("product: need 0 <= i <= j");
  Eigen::MatrixXd F = Eigen::MatrixXd::Identity(A_.rows(), A_.cols());
  for (long k = i; k < j; ++k) F = (factor(k) * F).eval();
  return F;
}

const Eigen::MatrixXd& ProductChain::from_origin(long n) {
  if (n < 0) throw PreconditionError("from_origin: n must be nonnegative");
  auto hit = cache_.find(n);
  if (hit != cache_.end()) return hit->second;
  auto below = std::prev(cache_.upper_bound(n));
  Eigen::MatrixXd F = below->second;
  for (long k = below->first; k < n; ++k) F = (factor(k) * F).eval();
  return cache_.emplace(n, std::move(F)).first->second;
}

Eigen::VectorXd exact_mean(ProductChain& chain, const Eigen::VectorXd& x0, long n) {
  Eigen::VectorXd m = chain.from_origin(n) * x0;
  return m;
}

Eigen::VectorXd exact_mean(const UrnSpec& spec, long n) {
  ProductChain chain(spec);
  Eigen::VectorXd m = exact_mean(chain, spec.initial, n);
  const double w = chain.weights()(n);
  if (std::abs(spec.activities.dot(m) - w) > 1e-10 * w) {
    std::ostringstream os;
    os << "exact_mean: a . E X_n = " << spec.activities.dot(m) << " but w_n = " << w;
    throw NumericalError(os.str());
  }
  return m;
}

std::vector<Eigen::VectorXd> mean_series(ProductChain& chain, const Eigen::VectorXd& x0, const std::vector<long>& grid) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(grid.size());
  for (const long n : grid) out.push_back(exact_mean(chain, x0, n));
  return out;
}

double projected_product_norm(const Eigen::MatrixXcd& P, const ProductChain& chain, long i, long j) {
  return operator_norm(P * chain.product(i, j).cast<Complex>());
}

double lsoff_sum(const Eigen::MatrixXcd& P, const ProductChain& chain, long n) {
  if (n < 2) throw PreconditionError("lsoff_sum: need n >= 2");
  // H = P F_{i,n}, F_{i,n} = F_{i+1,n} (I + A / w_i).
  Eigen::MatrixXcd H = P;
  double sum = 0.0;
  for (long i = n; i >= 1; --i) {
    if (i < n) H = (H * chain.factor(i).cast<Complex>()).eval();
    const double norm = operator_norm(H);
    sum += norm * norm;
  }
  return sum;
}

ProductBound lsof_bound(const SpectralComponent& component, double b) {
  return ProductBound{component.lambda.real() / b, component.nu};
}

SumBound lsoff_bound(const SpectralComponent& component, double b) {
  const double gamma = component.lambda.real() / b;
  const double t = 1e-8 * std::max(1.0, std::abs(gamma));
  if (std::abs(gamma - 0.5) <= t) return SumBound{1.0, 1 + 2 * component.nu};
  if (gamma < 0.5) return SumBound{1.0, 0};
  return SumBound{2.0 * gamma, 2 * component.nu};
}

std::vector<std::pair<long, long>> lsof_grid(long i0, int max_doublings) {
  std::vector<std::pair<long, long>> grid;
  for (long i : {i0, 2 * i0, 4 * i0})
    for (int d = 0; d <= max_doublings; ++d) grid.emplace_back(i, i << d);
  return grid;
}

long lsof_start(const ProductChain& chain, Complex lambda) {
  const auto& w = chain.weights();
  long i = 1;
  while (w(i) < 2.0 * std::abs(lambda)) ++i;
  return i;
}

BoundVerdict verify_lsof(const SpectralComponent& component, const ProductChain& chain,
                         const std::vector<std::pair<long, long>>& grid, const LsofOptions& options) {
  const double b = chain.weights().b;
  const auto bound = lsof_bound(component, b);
  const int log_power = options.log_power_override.value_or(bound.log_power);

  double r_min = std::numeric_limits<double>::infinity(), r_max = 0.0;
  for (const auto& [i, j] : grid) {
    if (i < 1 || j < i) throw PreconditionError("verify_lsof: grid needs 1 <= i <= j");
    const double r = static_cast<double>(j) / static_cast<double>(i);
    r_min = std::min(r_min, r);
    r_max = std::max(r_max, r);
  }
  if (grid.size() < 3 || r_max / r_min < 100.0) throw PreconditionError("verify_lsof: degenerate grid (need >= 2 decades of j/i)");

  // Group by i so each row costs one sweep over j.
  std::vector<std::pair<long, long>> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> xs, ys, shapes, observed;
  long current_i = -1, current_j = 0;
  Eigen::MatrixXcd H;
  for (const auto& [i, j] : sorted) {
    if (i != current_i) {
      current_i = i;
      current_j = i;
      H = component.P;
    }
    for (; current_j < j; ++current_j) H = (H * chain.factor(current_j).cast<Complex>()).eval();
    const double norm = operator_norm(H);
    const double r = static_cast<double>(j) / static_cast<double>(i);
    const double log_term = std::log1p(std::log(r));
    xs.push_back(std::log(r));
    ys.push_back(std::log(norm) - log_power * log_term);
    observed.push_back(norm);
    shapes.push_back(std::pow(r, bound.exponent) * std::pow(1.0 + std::log(r), log_power));
  }

  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }

  BoundVerdict v;
  v.lambda = component.lambda;
  v.exponent_theoretical = bound.exponent;
  v.log_power_theoretical = log_power;
  v.exponent_fitted = sxy / sxx;
  double c_lo = std::numeric_limits<double>::infinity(), c_hi = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double c = observed[k] / shapes[k];
    c_lo = std::min(c_lo, c);
    c_hi = std::max(c_hi, c);
  }
  v.constant_estimate = c_hi;
  v.constant_spread = c_lo > 0.0 ? c_hi / c_lo : std::numeric_limits<double>::infinity();
  v.pass = v.exponent_fitted <= v.exponent_theoretical + options.slope_tolerance &&
           v.constant_spread <= options.max_constant_spread;
  return v;
}

std::vector<long> lsoff_grid(int lo, int hi) {
  std::vector<long> ns;
  for (int k = lo; k <= hi; ++k) ns.push_back(1L << k);
  return ns;
}

BoundVerdict verify_lsoff(const SpectralComponent& component, const ProductChain& chain, const std::vector<long>& ns,
                          double tolerance) {
  if (ns.size() < 5) throw PreconditionError("verify_lsoff: need >= 5 grid points");
  const auto [lo, hi] = std::minmax_element(ns.begin(), ns.end());
  if (*lo < 2 || static_cast<double>(*hi) < 100.0 * static_cast<double>(*lo))
    throw PreconditionError("verify_lsoff: degenerate grid (need n >= 2 over >= 2 decades)");
  const SumBound bound = lsoff_bound(component, chain.weights().b);

  std::vector<double> xs, ys, ratios;
  for (const long n : ns) {
    const double sum = lsoff_sum(component.P, chain, n);
    const double ln = std::log(static_cast<double>(n));
    xs.push_back(ln);
    ys.push_back(std::log(sum) - bound.log_power * std::log(ln));
    ratios.push_back(sum / (std::pow(static_cast<double>(n), bound.exponent) * std::pow(ln, bound.log_power)));
  }
  const double m = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }

  BoundVerdict v;
  v.lambda = component.lambda;
  v.exponent_theoretical = bound.exponent;
  v.log_power_theoretical = bound.log_power;
  v.exponent_fitted = sxy / sxx;
  const auto [c_lo, c_hi] = std::minmax_element(ratios.begin(), ratios.end());
  v.constant_estimate = *c_hi;
  v.constant_spread = *c_lo > 0.0 ? *c_hi / *c_lo : std::numeric_limits<double>::infinity();
  v.pass = std::abs(v.exponent_fitted - v.exponent_theoretical) <= tolerance;
  return v;
}

}  // namespace polya
