#include "polya/rational.hpp"

#include <cmath>

namespace polya {

Rational rationalize(double x, long long max_denominator) {
  if (!std::isfinite(x)) return Rational(0);
  if (std::floor(x) == x) return Rational(x);
  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  // Convergents h/k of the continued fraction of |x|.
  const double ax = std::abs(x);
  double rem = ax;
  long long h_prev = 1, h = static_cast<long long>(std::floor(rem));
  long long k_prev = 0, k = 1;
  for (int iter = 0; iter < 64; ++iter) {
    if (std::abs(static_cast<double>(h) / static_cast<double>(k) - ax) <= tol) {
      Rational r(h);
      r /= k;
      return x < 0 ? Rational(-r) : r;
    }
    const double frac = rem - std::floor(rem);
    if (frac == 0.0) break;
    rem = 1.0 / frac;
    const long long a = static_cast<long long>(std::floor(rem));
    const long long h_next = a * h + h_prev;
    const long long k_next = a * k + k_prev;
    if (k_next > max_denominator || k_next <= 0) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return Rational(x);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace polya
