#pragma once

#include <Eigen/Dense>

namespace polya {

/// Largest singular value.
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  return static_cast<double>(svd.singularValues()(0));
}

/// Number of singular values at or below `threshold`.
template <typename Derived>
Eigen::Index numerical_nullity(const Eigen::MatrixBase<Derived>& m, double threshold) {
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  const auto& s = svd.singularValues();
  Eigen::Index nullity = m.cols() - s.size();
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) <= threshold) ++nullity;
  return nullity;
}

template <typename Derived>
double condition_number(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  const auto& s = svd.singularValues();
  const double smallest = static_cast<double>(s(s.size() - 1));
  return smallest > 0.0 ? static_cast<double>(s(0)) / smallest : std::numeric_limits<double>::infinity();
}

}  // namespace polya
