#pragma once

#include <boost/multiprecision/gmp.hpp>

namespace polya {

// Expression templates off so the type composes with Eigen.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Recovers the intended rational behind a double (1/3 from 0.333..., 0.1
/// from 0.1000...) via continued fractions with denominators up to
/// `max_denominator`; falls back to the exact binary value of `x`.
Rational rationalize(double x, long long max_denominator = 1000000);

double to_double(const Rational& r);

}  // namespace polya
