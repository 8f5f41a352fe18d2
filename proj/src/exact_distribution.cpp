#include "polya/exact_distribution.hpp"

#include <cmath>
#include <sstream>

#include "polya/errors.hpp"

namespace polya {

Rational ExactDistribution::total_probability() const {
  Rational total = 0;
  for (const auto& [state, prob] : support) total += prob;
  return total;
}

std::vector<Rational> ExactDistribution::mean() const {
  std::vector<Rational> m;
  for (const auto& [state, prob] : support) {
    if (m.empty()) m.assign(state.size(), Rational(0));
    for (std::size_t i = 0; i < state.size(); ++i) m[i] += prob * Rational(state[i]);
  }
  return m;
}

Rational ExactDistribution::covariance(std::size_t i, std::size_t j) const {
  const auto m = mean();
  Rational c = 0;
  for (const auto& [state, prob] : support) c += prob * (Rational(state[i]) - m[i]) * (Rational(state[j]) - m[j]);
  return c;
}

ExactDistribution exact_distribution(const UrnSpec& spec, long n, std::size_t state_cap) {
  if (n < 0) throw PreconditionError("exact_distribution: n must be nonnegative");
  if (!is_integer_spec(spec)) throw PreconditionError("exact_distribution: needs integer initial state and atoms");
  const std::size_t q = static_cast<std::size_t>(spec.colours());

  std::vector<Rational> activity(q);
  for (std::size_t i = 0; i < q; ++i) activity[i] = rationalize(spec.activities[static_cast<Eigen::Index>(i)]);
  struct Move {
    Rational probability;
    IntegerState delta;
  };
  std::vector<std::vector<Move>> moves(q);
  for (std::size_t j = 0; j < q; ++j) {
    Rational mass = 0;
    for (const auto& atom : spec.replacements[j].atoms) {
      Move mv{rationalize(atom.probability), IntegerState(q)};
      for (std::size_t i = 0; i < q; ++i) mv.delta[i] = std::llround(atom.vector[static_cast<Eigen::Index>(i)]);
      mass += mv.probability;
      moves[j].push_back(std::move(mv));
    }
    if (mass != 1) throw PreconditionError("exact_distribution: atom probabilities do not sum exactly to 1");
  }

  ExactDistribution dist;
  IntegerState start(q);
  for (std::size_t i = 0; i < q; ++i) start[i] = std::llround(spec.initial[static_cast<Eigen::Index>(i)]);
  dist.support.emplace(start, Rational(1));

  for (long step = 0; step < n; ++step) {
    std::map<IntegerState, Rational> next;
    for (const auto& [state, prob] : dist.support) {
      Rational total = 0;
      for (std::size_t i = 0; i < q; ++i) total += activity[i] * Rational(state[i]);
      if (total <= 0) throw TenabilityError("exact_distribution: reachable state with zero total activity");
      for (std::size_t j = 0; j < q; ++j) {
        if (activity[j] == 0 || state[j] == 0) continue;
        const Rational pick = prob * activity[j] * Rational(state[j]) / total;
        for (const auto& mv : moves[j]) {
          IntegerState to = state;
          for (std::size_t i = 0; i < q; ++i) {
            to[i] += mv.delta[i];
            if (to[i] < 0) {
              std::ostringstream os;
              os << "exact_distribution: negative count of colour " << i + 1 << " reachable at step " << step + 1;
              throw TenabilityError(os.str());
            }
          }
          next[std::move(to)] += pick * mv.probability;
          if (next.size() > state_cap) {
            std::ostringstream os;
            os << "exact_distribution: more than " << state_cap << " reachable states at step " << step + 1;
            throw StateSpaceExceeded(os.str());
          }
        }
      }
    }
    dist.support = std::move(next);
    dist.n = step + 1;
  }
  return dist;
}

namespace {

void check_mean(const ExactDistribution& dist, const Eigen::VectorXd& exact_mean) {
  const auto m = dist.mean();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double expected = exact_mean[static_cast<Eigen::Index>(i)];
    if (std::abs(to_double(m[i]) - expected) > 1e-10 * (1.0 + std::abs(expected))) {
      std::ostringstream os;
      os << "exact distribution mean " << to_double(m[i]) << " disagrees with F_{0,n} X_0 = " << expected
         << " for colour " << i + 1;
      throw NumericalError(os.str());
    }
  }
}

}  // namespace

ExactMoments exact_central_moment(const ExactDistribution& dist, const Eigen::VectorXd& exact_mean, double p) {
  check_mean(dist, exact_mean);
  const Eigen::Index q = exact_mean.size();
  ExactMoments out;
  out.variance = Eigen::VectorXd::Zero(q);
  double acc = 0.0;
  for (const auto& [state, prob] : dist.support) {
    const double w = to_double(prob);
    Eigen::VectorXd dev(q);
    for (Eigen::Index i = 0; i < q; ++i) dev[i] = static_cast<double>(state[static_cast<std::size_t>(i)]) - exact_mean[i];
    acc += w * std::pow(dev.norm(), p);
    out.variance += w * dev.cwiseAbs2();
  }
  out.norm_p = std::pow(acc, 1.0 / p);
  return out;
}

double exact_component_moment(const ExactDistribution& dist, const Eigen::VectorXd& exact_mean, std::size_t component,
                              double p) {
  check_mean(dist, exact_mean);
  double acc = 0.0;
  for (const auto& [state, prob] : dist.support)
    acc += to_double(prob) *
           std::pow(std::abs(static_cast<double>(state[component]) - exact_mean[static_cast<Eigen::Index>(component)]), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace polya
