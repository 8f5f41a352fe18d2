#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace polya {

struct Atom {
  double probability = 1.0;
  Eigen::VectorXd vector;
};

/// Finite-support law of the replacement vector added after drawing one
/// colour. `deterministic` only records the file form the law came from so
/// that serialization reproduces it.
struct ReplacementDistribution {
  std::vector<Atom> atoms;
  bool deterministic = false;

  static ReplacementDistribution fixed(Eigen::VectorXd v);
  static ReplacementDistribution mixture(std::vector<Atom> atoms);

  Eigen::VectorXd mean() const;
  double total_mass() const;
};

/// A generalized Pólya urn: q colours with activities, one replacement law
/// per colour, and a nonrandom initial composition.
struct UrnSpec {
  std::vector<std::string> colors;
  Eigen::VectorXd activities;
  std::vector<ReplacementDistribution> replacements;
  Eigen::VectorXd initial;

  Eigen::Index colours() const { return activities.size(); }
};

/// Builds a spec with colour names c1..cq.
UrnSpec make_spec(Eigen::VectorXd activities,
                  std::vector<ReplacementDistribution> replacements,
                  Eigen::VectorXd initial);

/// Throws InvalidSpec on the first violated well-formedness rule; otherwise
/// returns its argument.
const UrnSpec& validate_spec(const UrnSpec& spec);

inline constexpr double kBalanceTolerance = 1e-12;
inline constexpr double kProbabilityTolerance = 1e-12;

struct BalanceCertificate {
  bool balanced = false;
  // Common activity added per draw when balanced; midpoint of the observed
  // range of a·atom otherwise.
  double b = 0.0;
  double worst_deviation = 0.0;
};

BalanceCertificate check_balanced(const UrnSpec& spec);

enum class Tenability { provably_tenable, unknown };

/// Sufficient static condition for tenability: integer entries, nonnegative
/// off-diagonal replacements, nonnegative activity change per draw, and
/// diagonal removals no larger than the gcd of the initial count and every
/// replacement entry of that colour.
Tenability static_tenability_check(const UrnSpec& spec);

/// (A)_{ij} = a_j E[xi_j]_i. Column j is the mean drift from drawing colour j.
Eigen::MatrixXd intensity_matrix(const UrnSpec& spec);

/// Deterministic total activity w_n = w_0 + n b of a balanced urn.
struct WeightSchedule {
  double w0 = 1.0;
  double b = 1.0;

  double operator()(long n) const { return w0 + static_cast<double>(n) * b; }
};

/// Throws NotBalanced when the spec is not balanced.
WeightSchedule weight_schedule(const UrnSpec& spec);

double total_weight(const UrnSpec& spec, long n);

/// True if every entry of X0 and of every atom is an integer.
bool is_integer_spec(const UrnSpec& spec);

/// True if the directed graph i <- j for (A)_{ij} != 0 is strongly connected.
bool is_irreducible(const Eigen::MatrixXd& A);

/// Applies a colour permutation: new colour k is old colour perm[k].
UrnSpec permute_colours(const UrnSpec& spec, const std::vector<int>& perm);

}  // namespace polya
