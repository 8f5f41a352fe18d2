#include "polya/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "polya/errors.hpp"
#include "polya/linalg.hpp"

namespace polya {

namespace {

using Index = Eigen::Index;

// Single-linkage grouping of points closer than `radius`.
std::vector<std::vector<Complex>> link(const std::vector<Complex>& values, double radius) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= radius) parent[find(i)] = find(j);
  std::vector<std::vector<Complex>> groups;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(values[i]);
  }
  return groups;
}

Complex mean_of(const std::vector<Complex>& v) {
  Complex s = 0.0;
  for (const auto& x : v) s += x;
  return s / static_cast<double>(v.size());
}

Eigen::MatrixXcd shifted_power(const Eigen::MatrixXcd& A, Complex lambda, int k) {
  const Eigen::MatrixXcd shifted = A - lambda * Eigen::MatrixXcd::Identity(A.rows(), A.cols());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(A.rows(), A.cols());
  for (int i = 0; i < k; ++i) out = (out * shifted).eval();
  return out;
}

struct Cluster {
  Complex lambda;
  int mult;
};

}  // namespace

const SpectralComponent& Spectrum::at(Complex lambda) const {
  const SpectralComponent* best = nullptr;
  for (const auto& c : components)
    if (std::abs(c.lambda - lambda) <= tolerance && (!best || std::abs(c.lambda - lambda) < std::abs(best->lambda - lambda)))
      best = &c;
  if (!best) {
    std::ostringstream os;
    os << "no eigenvalue within " << tolerance << " of " << lambda;
    throw PreconditionError(os.str());
  }
  return *best;
}

Spectrum eigen_decompose(const Eigen::MatrixXd& A, const SpectralTolerances& tol, std::optional<double> b) {
  Spectrum s = eigen_decompose(Eigen::MatrixXcd(A.cast<Complex>()), tol, b);
  // Real input: snap eigenvalues that are real up to the tolerance, and
  // integers up to rounding (urn matrices are mostly small integers).
  const double dust = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + s.norm);
  for (auto& c : s.components) {
    if (std::abs(c.lambda.imag()) <= s.tolerance) c.lambda = Complex(c.lambda.real(), 0.0);
    const double re = std::round(c.lambda.real()), im = std::round(c.lambda.imag());
    if (std::abs(c.lambda.real() - re) <= dust) c.lambda.real(re);
    if (std::abs(c.lambda.imag() - im) <= dust) c.lambda.imag(im);
  }
  for (std::size_t k = 0; k < s.ordered_eigenvalues.size(); ++k)
    s.ordered_eigenvalues[k] = s.components[s.ordered_component[k]].lambda;
  return s;
}

Spectrum eigen_decompose(const Eigen::MatrixXcd& A, const SpectralTolerances& tol, std::optional<double> b) {
  if (A.rows() != A.cols() || A.rows() == 0) throw PreconditionError("eigen_decompose: matrix must be square and nonempty");
  if (!A.allFinite()) throw PreconditionError("eigen_decompose: matrix has non-finite entries");
  if (!(tol.cluster > 0.0)) throw PreconditionError("eigen_decompose: clustering tolerance must be positive");

  const Index q = A.rows();
  Spectrum out;
  out.norm = operator_norm(A);
  const double scale = 1.0 + out.norm;
  out.tolerance = tol.cluster * scale;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(A, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen_decompose: eigenvalue iteration did not converge");
  std::vector<Complex> values(static_cast<std::size_t>(q));
  for (Index i = 0; i < q; ++i) values[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);

  auto rank_threshold = [&](int k) { return tol.rank * std::pow(scale, k); };
  auto nullity_at = [&](Complex lambda, int k) {
    return numerical_nullity(shifted_power(A, lambda, k), rank_threshold(k));
  };

  // Eigenvalues of a defective block come back spread over a small circle;
  // regroup them when the rank test confirms a single generalized eigenspace.
  std::vector<Cluster> clusters;
  for (const auto& group : link(values, tol.jordan_merge * scale)) {
    const int m = static_cast<int>(group.size());
    const Complex centre = mean_of(group);
    if (m == 1 || nullity_at(centre, m) == m) {
      clusters.push_back({centre, m});
      continue;
    }
    for (const auto& sub : link(group, out.tolerance)) clusters.push_back({mean_of(sub), static_cast<int>(sub.size())});
  }

  std::vector<Eigen::MatrixXcd> bases;
  std::vector<int> indices;
  for (const auto& c : clusters) {
    int index = 0;
    for (int k = 1; k <= c.mult; ++k) {
      const Index nullity = nullity_at(c.lambda, k);
      if (nullity > c.mult) {
        std::ostringstream os;
        os << "eigen_decompose: null space of (A - " << c.lambda << " I)^" << k << " has dimension " << nullity
           << " > multiplicity " << c.mult << "; loosen the clustering tolerance";
        throw NumericalError(os.str());
      }
      if (nullity == c.mult) {
        index = k;
        break;
      }
    }
    if (index == 0) {
      std::ostringstream os;
      os << "eigen_decompose: generalized eigenspace of " << c.lambda << " has dimension below multiplicity " << c.mult;
      throw NumericalError(os.str());
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted_power(A, c.lambda, c.mult), Eigen::ComputeFullV);
    bases.push_back(svd.matrixV().rightCols(c.mult));
    indices.push_back(index - 1);
  }

  Eigen::MatrixXcd S(q, q);
  Index offset = 0;
  for (const auto& basis : bases) {
    S.middleCols(offset, basis.cols()) = basis;
    offset += basis.cols();
  }
  const double cond = condition_number(S);
  if (!(cond <= tol.max_condition)) {
    std::ostringstream os;
    os << "eigen_decompose: generalized eigenbasis condition number " << cond << " exceeds " << tol.max_condition;
    throw NumericalError(os.str());
  }
  const Eigen::MatrixXcd S_inv = S.fullPivLu().inverse();

  offset = 0;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const int m = clusters[k].mult;
    SpectralComponent comp;
    comp.lambda = clusters[k].lambda;
    comp.alg_mult = m;
    comp.nu = indices[k];
    comp.P = bases[k] * S_inv.middleRows(offset, m);
    comp.N = (A - comp.lambda * Eigen::MatrixXcd::Identity(q, q)) * comp.P;
    if (comp.nu == 0) comp.N.setZero();
    out.components.push_back(std::move(comp));
    offset += m;
  }

  const double t = out.tolerance;
  std::sort(out.components.begin(), out.components.end(), [t](const SpectralComponent& x, const SpectralComponent& y) {
    if (std::abs(x.lambda.real() - y.lambda.real()) > t) return x.lambda.real() > y.lambda.real();
    if (x.nu != y.nu) return x.nu > y.nu;
    if (std::abs(x.lambda.imag() - y.lambda.imag()) > t) return x.lambda.imag() > y.lambda.imag();
    return std::make_pair(x.lambda.real(), x.lambda.imag()) > std::make_pair(y.lambda.real(), y.lambda.imag());
  });
  for (std::size_t k = 0; k < out.components.size(); ++k)
    for (int r = 0; r < out.components[k].alg_mult; ++r) {
      out.ordered_eigenvalues.push_back(out.components[k].lambda);
      out.ordered_component.push_back(k);
    }
  if (b) out.b_check = std::abs(out.leading().lambda - Complex(*b, 0.0)) <= t;
  return out;
}

std::string_view to_string(UrnKind kind) {
  switch (kind) {
    case UrnKind::small_strict: return "small";
    case UrnKind::critical: return "critical";
    case UrnKind::large: return "large";
    case UrnKind::degenerate: return "degenerate_Re_lambda2_eq_lambda1";
  }
  return "unknown";
}

UrnClassification classify_urn(const Spectrum& spectrum, double b) {
  const double t = spectrum.tolerance;
  const Complex lambda1 = spectrum.leading().lambda;
  if (std::abs(lambda1 - Complex(b, 0.0)) > t) {
    std::ostringstream os;
    os << "lambda_1 = " << lambda1 << " differs from b = " << b;
    throw PreconditionError(os.str());
  }
  UrnClassification c;
  c.lambda2 = spectrum.ordered_eigenvalues.at(1);
  c.nu2 = spectrum.components[spectrum.ordered_component[1]].nu;
  const double re2 = c.lambda2.real();
  const double l1 = lambda1.real();
  c.ratio = re2 / l1;
  if (std::abs(re2 - l1) <= t) c.kind = UrnKind::degenerate;
  else if (std::abs(re2 - 0.5 * l1) <= t) c.kind = UrnKind::critical;
  else if (re2 < 0.5 * l1) c.kind = UrnKind::small_strict;
  else c.kind = UrnKind::large;
  return c;
}

PrincipalPair principal_pair(const Spectrum& spectrum, const Eigen::MatrixXd& A, const Eigen::VectorXd& activities,
                             double b) {
  const auto& lead = spectrum.leading();
  if (std::abs(lead.lambda - Complex(b, 0.0)) > spectrum.tolerance)
    throw PreconditionError("principal_pair: lambda_1 differs from b");
  if (lead.alg_mult != 1) throw PreconditionError("principal_pair: lambda_1 multiple");

  const Eigen::Index q = A.rows();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A - b * Eigen::MatrixXd::Identity(q, q), Eigen::ComputeFullV);
  Eigen::VectorXd v = svd.matrixV().col(q - 1);
  const double scale = activities.dot(v);
  if (std::abs(scale) <= 1e-14 * activities.norm() * v.norm())
    throw NumericalError("principal_pair: right eigenvector orthogonal to the activity vector");
  PrincipalPair pair;
  pair.u1 = activities;
  pair.v1 = v / scale;
  const Eigen::MatrixXcd outer = (pair.v1 * activities.transpose()).cast<Complex>();
  pair.projection_residual = operator_norm(lead.P - outer);
  return pair;
}

double SpectralResiduals::max() const {
  return std::max({sum_of_projections, cross_products, idempotence, commutation, jordan_relation, nilpotency,
                   reconstruction});
}

SpectralResiduals verify_spectral_identities(const Spectrum& spectrum, const Eigen::MatrixXcd& A) {
  const Eigen::Index q = A.rows();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(q, q);
  SpectralResiduals r;
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(q, q);
  Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(q, q);
  const auto& comps = spectrum.components;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto& c = comps[k];
    sum += c.P;
    rebuilt += c.lambda * c.P + c.N;
    r.idempotence = std::max(r.idempotence, operator_norm(c.P * c.P - c.P));
    r.commutation = std::max(r.commutation, operator_norm(A * c.P - c.P * A));
    r.jordan_relation = std::max(r.jordan_relation, operator_norm((A - c.lambda * I) * c.P - c.N));
    Eigen::MatrixXcd power = I;
    for (int i = 0; i <= c.nu; ++i) power = (power * c.N).eval();
    r.nilpotency = std::max(r.nilpotency, operator_norm(power));
    for (std::size_t l = 0; l < comps.size(); ++l)
      if (l != k) r.cross_products = std::max(r.cross_products, operator_norm(c.P * comps[l].P));
  }
  r.sum_of_projections = operator_norm(sum - I);
  r.reconstruction = operator_norm(rebuilt - A);
  return r;
}

bool leading_eigenvalue_dominates(const Spectrum& spectrum, double b) {
  for (const auto& c : spectrum.components) {
    if (c.lambda.real() > b + spectrum.tolerance) return false;
    if (std::abs(c.lambda.real() - b) <= spectrum.tolerance && c.nu != 0) return false;
  }
  return true;
}

}  // namespace polya
