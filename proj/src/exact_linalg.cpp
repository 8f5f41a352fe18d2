#include "polya/exact_linalg.hpp"

#include <algorithm>

#include "polya/errors.hpp"

namespace polya {

DenseMatrix<Rational> to_rational(const Eigen::MatrixXd& a) {
  DenseMatrix<Rational> r(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r(i, j) = rationalize(a(i, j));
  return r;
}

namespace {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

Integer lcm_of_denominators(const DenseMatrix<Rational>& a) {
  Integer l = 1;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) l = boost::multiprecision::lcm(l, denominator(a(i, j)));
  return l;
}

}  // namespace

ExactSpectrum exact_spectrum(const DenseMatrix<Rational>& a) {
  const Eigen::Index q = a.rows();
  ExactSpectrum out;
  out.char_poly = characteristic_polynomial(a);
  const auto g = gcd(out.char_poly, derivative(out.char_poly));
  out.distinct_eigenvalues = static_cast<int>(q) - degree(g);

  // Rational eigenvalues of A are mu/D with mu an integer root of
  // det(tI - DA), a monic integer polynomial; |mu| <= ||DA||_inf.
  const Integer den = lcm_of_denominators(a);
  Rational bound = 0;
  for (Eigen::Index i = 0; i < q; ++i) {
    Rational row = 0;
    for (Eigen::Index j = 0; j < q; ++j) row += abs(a(i, j));
    bound = std::max(bound, row);
  }
  const Integer limit = Integer(bound * Rational(den)) + 1;
  if (limit > 2000000) throw NumericalError("exact spectrum: eigenvalue search range too large");
  const long range = limit.convert_to<long>();

  Polynomial<Rational> remaining = out.char_poly;
  const DenseMatrix<Rational> id = DenseMatrix<Rational>::Identity(q, q);
  for (long mu = -range; mu <= range && degree(remaining) > 0; ++mu) {
    Rational lambda(mu);
    lambda /= Rational(den);
    int mult = 0;
    while (degree(remaining) > 0 && evaluate(remaining, lambda) == Rational(0)) {
      remaining = divide(remaining, Polynomial<Rational>{-lambda, Rational(1)}).first;
      ++mult;
    }
    if (mult == 0) continue;
    const DenseMatrix<Rational> shifted = a - lambda * id;
    DenseMatrix<Rational> power = id;
    int index = 0;
    for (int k = 1; k <= mult; ++k) {
      power = (power * shifted).eval();
      if (exact_rank(power) == q - mult) {
        index = k;
        break;
      }
    }
    out.rational_eigenvalues.push_back(ExactEigenvalue{lambda, mult, index - 1});
  }
  return out;
}

}  // namespace polya
