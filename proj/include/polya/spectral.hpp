#pragma once

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace polya {

using Complex = std::complex<double>;

/// Thresholds for Jordan-structure detection. Each is relative: `cluster`
/// and `jordan_merge` scale with (1 + ||A||), `rank` with (1 + ||A||)^k when
/// testing (A - lambda I)^k.
struct SpectralTolerances {
  double cluster = 1e-8;
  double rank = 1e-10;
  // Radius inside which nearby computed eigenvalues are tested as one
  // defective eigenvalue (a Jordan block of size k perturbs them by ~eps^(1/k)).
  double jordan_merge = 1e-3;
  double max_condition = 1e10;
};

/// One distinct eigenvalue with its spectral projection P and nilpotent part
/// N = (A - lambda I) P.
struct SpectralComponent {
  Complex lambda;
  int alg_mult = 1;
  int nu = 0;
  Eigen::MatrixXcd P;
  Eigen::MatrixXcd N;
};

struct Spectrum {
  // Decreasing real part; ties by decreasing nu, then decreasing imaginary
  // part.
  std::vector<SpectralComponent> components;
  std::vector<Complex> ordered_eigenvalues;  // with multiplicity
  std::vector<std::size_t> ordered_component;  // component index of each ordered eigenvalue
  bool b_check = false;
  double norm = 0.0;  // ||A||_2
  double tolerance = 0.0;  // absolute clustering tolerance actually used

  const SpectralComponent& leading() const { return components.front(); }
  /// Component whose eigenvalue is within the clustering tolerance of `lambda`.
  const SpectralComponent& at(Complex lambda) const;
};

/// Full eigenstructure of A. When `b` is given, records whether lambda_1 = b.
/// Throws NumericalError if the generalized eigenbasis is too ill-conditioned
/// or the rank tests disagree with the eigenvalue clustering.
Spectrum eigen_decompose(const Eigen::MatrixXcd& A, const SpectralTolerances& tol = {},
                         std::optional<double> b = std::nullopt);
Spectrum eigen_decompose(const Eigen::MatrixXd& A, const SpectralTolerances& tol = {},
                         std::optional<double> b = std::nullopt);

enum class UrnKind { small_strict, critical, large, degenerate };

std::string_view to_string(UrnKind kind);

struct UrnClassification {
  UrnKind kind = UrnKind::small_strict;
  double ratio = 0.0;  // Re lambda_2 / lambda_1
  int nu2 = 0;
  Complex lambda2;
};

/// Small/critical/large by Re lambda_2 against lambda_1 / 2. Throws
/// PreconditionError when lambda_1 differs from b.
UrnClassification classify_urn(const Spectrum& spectrum, double b);

struct PrincipalPair {
  Eigen::VectorXd u1;  // the activity vector a
  Eigen::VectorXd v1;  // right eigenvector, a . v1 = 1
  double projection_residual = 0.0;  // ||P_{lambda_1} - v1 a'||
};

/// Throws PreconditionError if lambda_1 = b is not a simple eigenvalue.
PrincipalPair principal_pair(const Spectrum& spectrum, const Eigen::MatrixXd& A,
                             const Eigen::VectorXd& activities, double b);

struct SpectralResiduals {
  double sum_of_projections = 0.0;  // ||sum P - I||
  double cross_products = 0.0;      // max ||P_l P_m||, l != m
  double idempotence = 0.0;         // max ||P^2 - P||
  double commutation = 0.0;         // max ||A P - P A||
  double jordan_relation = 0.0;     // max ||(A - lambda) P - N||
  double nilpotency = 0.0;          // max ||N^(nu+1)||
  double reconstruction = 0.0;      // ||sum (lambda P + N) - A||

  double max() const;
};

SpectralResiduals verify_spectral_identities(const Spectrum& spectrum, const Eigen::MatrixXcd& A);

/// Every eigenvalue has Re lambda <= b, and nu = 0 where Re lambda = b.
bool leading_eigenvalue_dominates(const Spectrum& spectrum, double b);

}  // namespace polya
