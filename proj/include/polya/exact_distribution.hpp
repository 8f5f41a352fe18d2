#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "polya/rational.hpp"
#include "polya/urn.hpp"

namespace polya {

using IntegerState = std::vector<long long>;

/// Exact law of X_n for an integer urn, probabilities as rationals.
struct ExactDistribution {
  long n = 0;
  std::map<IntegerState, Rational> support;

  Rational total_probability() const;
  std::vector<Rational> mean() const;
  /// Exact covariance matrix entries (i, j).
  Rational covariance(std::size_t i, std::size_t j) const;
};

inline constexpr std::size_t kDefaultStateCap = 1000000;

/// Forward dynamic programming over reachable states. Activities and atom
/// probabilities are read as exact rationals (see rationalize()). Throws
/// PreconditionError for non-integer specs, StateSpaceExceeded past the cap,
/// TenabilityError if a reachable state leaves the tenable region.
ExactDistribution exact_distribution(const UrnSpec& spec, long n, std::size_t state_cap = kDefaultStateCap);

struct ExactMoments {
  double norm_p = 0.0;        // (E|X_n - E X_n|^p)^(1/p)
  Eigen::VectorXd variance;   // componentwise
};

/// Central moments of the exact law about `exact_mean`. Throws NumericalError
/// if the law's own mean differs from `exact_mean` by more than 1e-10
/// (relative to 1 + |mean|).
ExactMoments exact_central_moment(const ExactDistribution& dist, const Eigen::VectorXd& exact_mean, double p);

/// Same, for the scalar |X_{n,component} - E X_{n,component}|.
double exact_component_moment(const ExactDistribution& dist, const Eigen::VectorXd& exact_mean, std::size_t component,
                              double p);

}  // namespace polya
