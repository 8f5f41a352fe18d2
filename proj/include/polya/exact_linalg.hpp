#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

#include "polya/rational.hpp"

namespace polya {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Dense polynomials over an exact field, coefficients in ascending order.
template <typename Scalar>
using Polynomial = std::vector<Scalar>;

/// Rank by Gaussian elimination with exact zero tests. Only meaningful for
/// exact scalar types.
template <typename Scalar>
Eigen::Index exact_rank(DenseMatrix<Scalar> m) {
  Eigen::Index rank = 0;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index pivot = rank;
    while (pivot < rows && m(pivot, c) == Scalar(0)) ++pivot;
    if (pivot == rows) continue;
    m.row(pivot).swap(m.row(rank));
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      if (m(r, c) == Scalar(0)) continue;
      const Scalar f = m(r, c) / m(rank, c);
      for (Eigen::Index k = c; k < cols; ++k) m(r, k) -= f * m(rank, k);
    }
    ++rank;
  }
  return rank;
}

/// det(tI - A) by Faddeev–LeVerrier; monic, degree q.
template <typename Scalar>
Polynomial<Scalar> characteristic_polynomial(const DenseMatrix<Scalar>& a) {
  const Eigen::Index n = a.rows();
  Polynomial<Scalar> c(static_cast<std::size_t>(n + 1), Scalar(0));
  c[static_cast<std::size_t>(n)] = Scalar(1);
  DenseMatrix<Scalar> m = DenseMatrix<Scalar>::Zero(n, n);
  const DenseMatrix<Scalar> id = DenseMatrix<Scalar>::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[static_cast<std::size_t>(n - k + 1)] * id;
    const DenseMatrix<Scalar> am = a * m;
    c[static_cast<std::size_t>(n - k)] = -am.trace() / Scalar(k);
  }
  return c;
}

template <typename Scalar>
void trim(Polynomial<Scalar>& p) {
  while (!p.empty() && p.back() == Scalar(0)) p.pop_back();
}

template <typename Scalar>
int degree(const Polynomial<Scalar>& p) {
  Polynomial<Scalar> t = p;
  trim(t);
  return static_cast<int>(t.size()) - 1;
}

template <typename Scalar>
Scalar evaluate(const Polynomial<Scalar>& p, const Scalar& x) {
  Scalar acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

template <typename Scalar>
Polynomial<Scalar> derivative(const Polynomial<Scalar>& p) {
  Polynomial<Scalar> d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(Scalar(static_cast<long>(i)) * p[i]);
  return d;
}

/// Quotient and remainder of p / d (d nonzero).
template <typename Scalar>
std::pair<Polynomial<Scalar>, Polynomial<Scalar>> divide(Polynomial<Scalar> p, Polynomial<Scalar> d) {
  trim(p);
  trim(d);
  if (p.size() < d.size()) return {Polynomial<Scalar>{}, p};
  Polynomial<Scalar> q(p.size() - d.size() + 1, Scalar(0));
  for (std::size_t i = q.size(); i-- > 0;) {
    const Scalar f = p[i + d.size() - 1] / d.back();
    q[i] = f;
    for (std::size_t j = 0; j < d.size(); ++j) p[i + j] -= f * d[j];
  }
  p.resize(d.size() - 1);
  trim(p);
  return {q, p};
}

template <typename Scalar>
Polynomial<Scalar> gcd(Polynomial<Scalar> a, Polynomial<Scalar> b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = divide(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const Scalar lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

template <typename Scalar>
DenseMatrix<Scalar> matrix_power(const DenseMatrix<Scalar>& m, int k) {
  DenseMatrix<Scalar> out = DenseMatrix<Scalar>::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = (out * m).eval();
  return out;
}

struct ExactEigenvalue {
  Rational value;
  int multiplicity = 0;
  int nu = 0;  // largest Jordan block size minus one
};

/// Exact spectral facts of a rational matrix: its characteristic polynomial,
/// the number of distinct (complex) eigenvalues, and every rational
/// eigenvalue with exact algebraic multiplicity and Jordan index.
struct ExactSpectrum {
  Polynomial<Rational> char_poly;
  int distinct_eigenvalues = 0;
  std::vector<ExactEigenvalue> rational_eigenvalues;
};

DenseMatrix<Rational> to_rational(const Eigen::MatrixXd& a);

ExactSpectrum exact_spectrum(const DenseMatrix<Rational>& a);

}  // namespace polya
