#include "polya/urn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "polya/errors.hpp"

namespace polya {

ReplacementDistribution ReplacementDistribution::fixed(Eigen::VectorXd v) {
  ReplacementDistribution d;
  d.atoms.push_back(Atom{1.0, std::move(v)});
  d.deterministic = true;
  return d;
}

ReplacementDistribution ReplacementDistribution::mixture(std::vector<Atom> atoms) {
  ReplacementDistribution d;
  d.atoms = std::move(atoms);
  return d;
}

Eigen::VectorXd ReplacementDistribution::mean() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(atoms.empty() ? 0 : atoms.front().vector.size());
  for (const auto& atom : atoms) m += atom.probability * atom.vector;
  return m;
}

double ReplacementDistribution::total_mass() const {
  double mass = 0.0;
  for (const auto& atom : atoms) mass += atom.probability;
  return mass;
}

UrnSpec make_spec(Eigen::VectorXd activities,
                  std::vector<ReplacementDistribution> replacements,
                  Eigen::VectorXd initial) {
  UrnSpec spec;
  for (Eigen::Index i = 0; i < activities.size(); ++i) spec.colors.push_back("c" + std::to_string(i + 1));
  spec.activities = std::move(activities);
  spec.replacements = std::move(replacements);
  spec.initial = std::move(initial);
  return spec;
}

namespace {

template <typename... Args>
[[noreturn]] void reject(Args&&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  throw InvalidSpec(os.str());
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

bool is_integral(double x) { return std::isfinite(x) && std::floor(x) == x; }

}  // namespace

const UrnSpec& validate_spec(const UrnSpec& spec) {
  const Eigen::Index q = spec.activities.size();
  if (q < 2) reject("dimension mismatch: need at least 2 colours, got ", q);
  if (spec.initial.size() != q) reject("dimension mismatch: initial has ", spec.initial.size(), " entries, expected ", q);
  if (static_cast<Eigen::Index>(spec.replacements.size()) != q)
    reject("dimension mismatch: ", spec.replacements.size(), " replacement laws for ", q, " colours");
  if (!spec.colors.empty() && static_cast<Eigen::Index>(spec.colors.size()) != q)
    reject("dimension mismatch: ", spec.colors.size(), " colour names for ", q, " colours");
  if (!all_finite(spec.activities) || !all_finite(spec.initial)) reject("non-finite activity or initial count");

  for (Eigen::Index i = 0; i < q; ++i) {
    if (spec.activities[i] < 0.0) reject("negative activity ", spec.activities[i], " for colour ", i + 1);
    if (spec.initial[i] < 0.0) reject("negative initial count ", spec.initial[i], " for colour ", i + 1);
  }

  for (Eigen::Index i = 0; i < q; ++i) {
    const auto& law = spec.replacements[static_cast<std::size_t>(i)];
    if (law.atoms.empty()) reject("empty replacement law for colour ", i + 1);
    for (const auto& atom : law.atoms) {
      if (atom.vector.size() != q)
        reject("dimension mismatch: replacement atom of colour ", i + 1, " has ", atom.vector.size(), " entries");
      if (!all_finite(atom.vector)) reject("non-finite replacement entry for colour ", i + 1);
      if (!(atom.probability > 0.0 && atom.probability <= 1.0))
        reject("atom probability ", atom.probability, " outside (0,1] for colour ", i + 1);
    }
    const double mass = law.total_mass();
    if (std::abs(mass - 1.0) > kProbabilityTolerance) reject("probability mass ", mass, " for colour ", i + 1);
  }

  if (!(spec.activities.dot(spec.initial) > 0.0)) reject("zero total activity");
  return spec;
}

BalanceCertificate check_balanced(const UrnSpec& spec) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& law : spec.replacements)
    for (const auto& atom : law.atoms) {
      const double added = spec.activities.dot(atom.vector);
      lo = std::min(lo, added);
      hi = std::max(hi, added);
    }
  BalanceCertificate cert;
  if (lo > hi) return cert;
  if (lo == hi) {
    cert.b = lo;
  } else {
    cert.b = 0.5 * (lo + hi);
    cert.worst_deviation = 0.5 * (hi - lo);
  }
  cert.balanced = cert.b > 0.0 && cert.worst_deviation <= kBalanceTolerance * std::max(1.0, std::abs(cert.b));
  return cert;
}

Tenability static_tenability_check(const UrnSpec& spec) {
  if (!is_integer_spec(spec)) return Tenability::unknown;
  const Eigen::Index q = spec.colours();
  for (Eigen::Index j = 0; j < q; ++j)
    for (const auto& atom : spec.replacements[static_cast<std::size_t>(j)].atoms) {
      if (spec.activities.dot(atom.vector) < 0.0) return Tenability::unknown;
      for (Eigen::Index i = 0; i < q; ++i)
        if (i != j && atom.vector[i] < 0.0) return Tenability::unknown;
    }

  for (Eigen::Index i = 0; i < q; ++i) {
    if (spec.activities[i] == 0.0) continue;  // never drawn, never removed from
    long long d = std::llround(spec.initial[i]);
    for (const auto& law : spec.replacements)
      for (const auto& atom : law.atoms) d = std::gcd(d, std::llabs(std::llround(atom.vector[i])));
    for (const auto& atom : spec.replacements[static_cast<std::size_t>(i)].atoms)
      if (atom.vector[i] < -static_cast<double>(d)) return Tenability::unknown;
  }
  return Tenability::provably_tenable;
}

Eigen::MatrixXd intensity_matrix(const UrnSpec& spec) {
  const Eigen::Index q = spec.colours();
  Eigen::MatrixXd A(q, q);
  for (Eigen::Index j = 0; j < q; ++j)
    A.col(j) = spec.activities[j] * spec.replacements[static_cast<std::size_t>(j)].mean();
  return A;
}

WeightSchedule weight_schedule(const UrnSpec& spec) {
  const auto cert = check_balanced(spec);
  if (!cert.balanced) {
    std::ostringstream os;
    os << "urn is not balanced (worst deviation " << cert.worst_deviation << ")";
    throw NotBalanced(os.str());
  }
  return WeightSchedule{spec.activities.dot(spec.initial), cert.b};
}

double total_weight(const UrnSpec& spec, long n) { return weight_schedule(spec)(n); }

bool is_integer_spec(const UrnSpec& spec) {
  for (Eigen::Index i = 0; i < spec.initial.size(); ++i)
    if (!is_integral(spec.initial[i])) return false;
  for (const auto& law : spec.replacements)
    for (const auto& atom : law.atoms)
      for (Eigen::Index i = 0; i < atom.vector.size(); ++i)
        if (!is_integral(atom.vector[i])) return false;
  return true;
}

bool is_irreducible(const Eigen::MatrixXd& A) {
  const Eigen::Index q = A.rows();
  auto reaches_all = [&](bool transpose) {
    std::vector<char> seen(static_cast<std::size_t>(q), 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const Eigen::Index j = stack.back();
      stack.pop_back();
      for (Eigen::Index i = 0; i < q; ++i) {
        const double entry = transpose ? A(j, i) : A(i, j);
        if (i != j && entry != 0.0 && !seen[static_cast<std::size_t>(i)]) {
          seen[static_cast<std::size_t>(i)] = 1;
          stack.push_back(i);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; });
  };
  return q > 0 && reaches_all(false) && reaches_all(true);
}

UrnSpec permute_colours(const UrnSpec& spec, const std::vector<int>& perm) {
  const Eigen::Index q = spec.colours();
  auto permute = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(q);
    for (Eigen::Index k = 0; k < q; ++k) out[k] = v[perm[static_cast<std::size_t>(k)]];
    return out;
  };
  UrnSpec out;
  for (Eigen::Index k = 0; k < q; ++k) {
    const auto old = static_cast<std::size_t>(perm[static_cast<std::size_t>(k)]);
    if (!spec.colors.empty()) out.colors.push_back(spec.colors[old]);
    ReplacementDistribution law = spec.replacements[old];
    for (auto& atom : law.atoms) atom.vector = permute(atom.vector);
    out.replacements.push_back(std::move(law));
  }
  out.activities = permute(spec.activities);
  out.initial = permute(spec.initial);
  return out;
}

}  // namespace polya
