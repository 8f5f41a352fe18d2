#pragma once

#include <vector>

#include "polya/moments.hpp"
#include "polya/spectral.hpp"

namespace polya {

/// log m_n = alpha log n + beta log log n + c with beta held fixed.
struct GrowthFit {
  double alpha_hat = 0.0;
  double beta_fixed = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
  long n_min = 0;
  long n_max = 0;
  std::size_t points = 0;
};

/// Least squares for alpha. Needs >= 5 points with n_max / n_min >= 100,
/// every n >= 2 and every value > 0 (PreconditionError otherwise).
GrowthFit fit_growth(const std::vector<long>& n, const std::vector<double>& values, double beta_fixed);
GrowthFit fit_growth(const std::vector<MomentPoint>& series, double beta_fixed);

/// Points with n_min <= n <= n_max.
std::vector<MomentPoint> window(const std::vector<MomentPoint>& series, long n_min, long n_max);

/// Power of n and power of log n in a moment growth bound.
struct GrowthCase {
  double exponent = 0.5;
  double log_power = 0.0;
};

/// Bound on ||P_lambda (X_n - E X_n)||_p: (1/2, 0) below b/2,
/// (1/2, nu + 1/2) at b/2, (Re lambda / b, nu) above.
GrowthCase theorem_t1_case(Complex lambda, int nu, double b);

/// Bound on ||X_n - E X_n||_p from Re lambda_2 / lambda_1. The degenerate
/// class Re lambda_2 = lambda_1 gives (1, nu2), i.e. linear growth.
GrowthCase theorem_t2_case(const UrnClassification& classification);

}  // namespace polya
