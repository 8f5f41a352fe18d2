#include "polya/growth.hpp"

#include <cmath>

#include "polya/errors.hpp"

namespace polya {

GrowthFit fit_growth(const std::vector<long>& n, const std::vector<double>& values, double beta_fixed) {
  if (n.size() != values.size()) throw PreconditionError("fit_growth: size mismatch");
  if (n.size() < 5) throw PreconditionError("fit_growth: degenerate grid (need >= 5 points)");
  long lo = n.front(), hi = n.front();
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (n[k] < 2) throw PreconditionError("fit_growth: grid points must be >= 2");
    if (!(values[k] > 0.0) || !std::isfinite(values[k])) throw PreconditionError("fit_growth: nonpositive series value");
    lo = std::min(lo, n[k]);
    hi = std::max(hi, n[k]);
  }
  if (static_cast<double>(hi) < 100.0 * static_cast<double>(lo))
    throw PreconditionError("fit_growth: degenerate grid (need >= 2 decades)");

  const std::size_t k_count = n.size();
  std::vector<double> x(k_count), y(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double ln = std::log(static_cast<double>(n[k]));
    x[k] = ln;
    y[k] = std::log(values[k]) - beta_fixed * std::log(ln);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= static_cast<double>(k_count);
  my /= static_cast<double>(k_count);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  GrowthFit fit;
  fit.alpha_hat = sxy / sxx;
  fit.intercept = my - fit.alpha_hat * mx;
  double rss = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    const double r = y[k] - fit.intercept - fit.alpha_hat * x[k];
    rss += r * r;
  }
  fit.std_error = std::sqrt(rss / static_cast<double>(k_count - 2) / sxx);
  fit.beta_fixed = beta_fixed;
  fit.n_min = lo;
  fit.n_max = hi;
  fit.points = k_count;
  return fit;
}

GrowthFit fit_growth(const std::vector<MomentPoint>& series, double beta_fixed) {
  std::vector<long> n;
  std::vector<double> v;
  for (const auto& pt : series) {
    n.push_back(pt.n);
    v.push_back(pt.estimate);
  }
  return fit_growth(n, v, beta_fixed);
}

std::vector<MomentPoint> window(const std::vector<MomentPoint>& series, long n_min, long n_max) {
  std::vector<MomentPoint> out;
  for (const auto& pt : series)
    if (pt.n >= n_min && pt.n <= n_max) out.push_back(pt);
  return out;
}

GrowthCase theorem_t1_case(Complex lambda, int nu, double b) {
  const double gamma = lambda.real() / b;
  if (std::abs(gamma - 0.5) <= 1e-8) return GrowthCase{0.5, nu + 0.5};
  if (gamma < 0.5) return GrowthCase{0.5, 0.0};
  return GrowthCase{gamma, static_cast<double>(nu)};
}

GrowthCase theorem_t2_case(const UrnClassification& c) {
  switch (c.kind) {
    case UrnKind::small_strict: return GrowthCase{0.5, 0.0};
    case UrnKind::critical: return GrowthCase{0.5, c.nu2 + 0.5};
    case UrnKind::large: return GrowthCase{c.ratio, static_cast<double>(c.nu2)};
    case UrnKind::degenerate: return GrowthCase{1.0, static_cast<double>(c.nu2)};
  }
  return {};
}

}  // namespace polya
