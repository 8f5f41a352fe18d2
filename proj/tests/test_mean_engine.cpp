#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "polya/errors.hpp"
#include "polya/linalg.hpp"
#include "polya/mean_engine.hpp"

using namespace polya;
using polya::testing::corpus;
using polya::testing::two_colour;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

// E X_k by enumerating every draw sequence with its probability.
Eigen::VectorXd enumerated_mean(const UrnSpec& spec, const Eigen::VectorXd& x, int steps) {
  if (steps == 0) return x;
  const double total = spec.activities.dot(x);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double pj = spec.activities[j] * x[j] / total;
    if (pj == 0.0) continue;
    for (const auto& atom : spec.replacements[static_cast<std::size_t>(j)].atoms)
      acc += pj * atom.probability * enumerated_mean(spec, x + atom.vector, steps - 1);
  }
  return acc;
}

}  // namespace

TEST(TransitionFactor, Examples) {
  const UrnSpec polya = corpus("polya");
  EXPECT_EQ(transition_factor(polya, 0), Eigen::MatrixXd(1.5 * Eigen::Matrix2d::Identity()));
  const UrnSpec friedman = corpus("friedman");
  EXPECT_EQ(transition_factor(friedman, 2), mat2(1, 0.25, 0.25, 1));
  EXPECT_LE((transition_factor(friedman, 1L << 50) - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-14);
  EXPECT_THROW(transition_factor(corpus("unbalanced"), 1), NotBalanced);
}

TEST(Product, TelescopesForIdentityIntensity) {
  const ProductChain chain(corpus("polya"));
  EXPECT_LE((chain.product(0, 10) - 6.0 * Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-13);
  EXPECT_EQ(chain.product(5, 5), Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2)));
}

TEST(Product, MatchesExplicitFactors) {
  const ProductChain chain(corpus("friedman"));
  const Eigen::MatrixXd A = mat2(0, 1, 1, 0);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd brute = (I + A / 4.0) * (I + A / 3.0) * (I + A / 2.0);
  EXPECT_LE((chain.product(0, 3) - brute).norm(), 1e-15);
}

TEST(ExactMean, Examples) {
  EXPECT_LE((exact_mean(corpus("polya"), 10) - Eigen::Vector2d(6, 6)).norm(), 1e-13);
  EXPECT_LE((exact_mean(corpus("friedman"), 10) - Eigen::Vector2d(6, 6)).norm(), 1e-13);
  const UrnSpec shifted = two_colour({0, 1}, {1, 0}, {2, 1});
  const Eigen::VectorXd m = exact_mean(shifted, 2);
  EXPECT_LE((m - enumerated_mean(shifted, shifted.initial, 2)).norm(), 1e-14);
  EXPECT_THROW(exact_mean(corpus("unbalanced"), 3), NotBalanced);
}

TEST(ExactMean, AgreesWithEnumerationOnCorpus) {
  for (const auto& name : polya::testing::balanced_corpus()) {
    const UrnSpec spec = corpus(name);
    for (int n = 0; n <= 6; ++n)
      EXPECT_LE((exact_mean(spec, n) - enumerated_mean(spec, spec.initial, n)).norm(), 1e-12 * (1 + n)) << name;
  }
}

TEST(ExactMean, TotalActivityFollowsWeights) {
  for (const auto& name : polya::testing::balanced_corpus()) {
    const UrnSpec spec = corpus(name);
    ProductChain chain(spec);
    const auto grid = std::vector<long>{1, 10, 100, 1000, 10000};
    const auto means = mean_series(chain, spec.initial, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double w = chain.weights()(grid[k]);
      EXPECT_LE(std::abs(spec.activities.dot(means[k]) - w), 1e-10 * w) << name;
    }
  }
}

TEST(ProductChain, CompositionCommutationAndLeftEigenvector) {
  std::mt19937_64 gen(2);
  std::uniform_int_distribution<long> pick(0, 400);
  for (const auto& name : polya::testing::balanced_corpus()) {
    const UrnSpec spec = corpus(name);
    const ProductChain chain(spec);
    const Spectrum s = eigen_decompose(chain.intensity());
    const auto& w = chain.weights();
    for (int trial = 0; trial < 10; ++trial) {
      long ijk[3] = {pick(gen), pick(gen), pick(gen)};
      std::sort(ijk, ijk + 3);
      const auto [i, j, k] = std::tuple(ijk[0], ijk[1], ijk[2]);
      const Eigen::MatrixXd Fik = chain.product(i, k);
      const Eigen::MatrixXd composed = chain.product(j, k) * chain.product(i, j);
      EXPECT_LE((Fik - composed).norm(), 1e-10 * Fik.norm()) << name;

      for (const auto& c : s.components) {
        const Eigen::MatrixXcd F = Fik.cast<Complex>();
        EXPECT_LE((c.P * F - F * c.P).norm(), 1e-9 * (1.0 + F.norm())) << name;
      }
      const Eigen::RowVectorXd lhs = spec.activities.transpose() * Fik;
      const Eigen::RowVectorXd rhs = (w(k) / w(i)) * spec.activities.transpose();
      EXPECT_LE((lhs - rhs).norm(), 1e-10 * rhs.norm()) << name;
    }
  }
}

TEST(ProjectedProductNorm, Examples) {
  const ProductChain chain(corpus("polya"));
  const Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(2, 2);
  EXPECT_NEAR(projected_product_norm(P, chain, 2, 20), 5.5, 1e-13);
  const ProductChain friedman(corpus("friedman"));
  const Spectrum s = eigen_decompose(friedman.intensity());
  EXPECT_NEAR(projected_product_norm(s.components[1].P, friedman, 7, 7), operator_norm(s.components[1].P), 1e-15);
}

TEST(LsoffSum, MatchesDirectSum) {
  const ProductChain chain(corpus("critical"));
  const Spectrum s = eigen_decompose(chain.intensity());
  for (const auto& c : s.components) {
    double direct = 0.0;
    for (long i = 1; i <= 50; ++i) direct += std::pow(projected_product_norm(c.P, chain, i, 50), 2);
    EXPECT_NEAR(lsoff_sum(c.P, chain, 50), direct, 1e-10 * direct);
  }
}

TEST(LsoffSum, SlopesOfTheThreeCases) {
  // A = I: telescoping (w_n / w_i)^2, slope 2.
  {
    const ProductChain chain(corpus("polya"));
    const Spectrum s = eigen_decompose(chain.intensity());
    const auto v = verify_lsoff(s.components[0], chain, lsoff_grid(7, 14), 0.01);
    EXPECT_NEAR(v.exponent_fitted, 2.0, 0.01);
    EXPECT_TRUE(v.pass);
  }
  // Friedman lambda = -1: below b / 2, slope 1.
  {
    const ProductChain chain(corpus("friedman"));
    const Spectrum s = eigen_decompose(chain.intensity());
    const auto v = verify_lsoff(s.at(-1.0), chain, lsoff_grid(7, 14));
    EXPECT_EQ(v.log_power_theoretical, 0);
    EXPECT_NEAR(v.exponent_fitted, 1.0, 0.05);
  }
  // Critical lambda = 2, b = 4: n log n.
  {
    const ProductChain chain(corpus("critical"));
    const Spectrum s = eigen_decompose(chain.intensity());
    const auto v = verify_lsoff(s.at(2.0), chain, lsoff_grid(7, 14));
    EXPECT_EQ(v.log_power_theoretical, 1);
    EXPECT_NEAR(v.exponent_fitted, 1.0, 0.05);
  }
}

TEST(LsoffSum, CorpusSlopesMatchCaseExponent) {
  for (const auto& name : polya::testing::balanced_corpus()) {
    const ProductChain chain(corpus(name));
    const Spectrum s = eigen_decompose(chain.intensity());
    for (const auto& c : s.components) {
      const auto v = verify_lsoff(c, chain, lsoff_grid(10, 20));
      EXPECT_TRUE(v.pass) << name << " lambda=" << c.lambda << " slope " << v.exponent_fitted << " vs "
                          << v.exponent_theoretical;
    }
  }
}

TEST(VerifyLsof, IdentityIntensityHasUnitSlope) {
  const ProductChain chain(corpus("polya"));
  const Spectrum s = eigen_decompose(chain.intensity());
  const auto v = verify_lsof(s.components[0], chain, lsof_grid(256));
  EXPECT_NEAR(v.exponent_fitted, 1.0, 1e-3);
  EXPECT_TRUE(v.pass);
}

TEST(VerifyLsof, NegativeEigenvalueDecays) {
  const ProductChain chain(corpus("friedman"));
  const Spectrum s = eigen_decompose(chain.intensity());
  const auto& c = s.at(-1.0);
  const auto v = verify_lsof(c, chain, lsof_grid(std::max(lsof_start(chain, c.lambda), 64L)));
  EXPECT_TRUE(v.pass);
  EXPECT_LE(v.exponent_fitted, -0.95);
}

TEST(VerifyLsof, JordanBlockNeedsTheLogTerm) {
  const Eigen::MatrixXd A = mat2(2, 1, 0, 2);
  const ProductChain chain(A, WeightSchedule{2.0, 2.0});
  const Spectrum s = eigen_decompose(A);
  ASSERT_EQ(s.components[0].nu, 1);
  const auto grid = lsof_grid(64);
  const auto with_log = verify_lsof(s.components[0], chain, grid);
  LsofOptions without;
  without.log_power_override = 0;
  const auto no_log = verify_lsof(s.components[0], chain, grid, without);
  EXPECT_TRUE(with_log.pass);
  EXPECT_FALSE(no_log.pass);
}

TEST(VerifyLsof, LargeUrnSecondEigenvalue) {
  const ProductChain chain(corpus("large"));
  const Spectrum s = eigen_decompose(chain.intensity());
  const auto v = verify_lsof(s.at(3.0), chain, lsof_grid(64));
  EXPECT_NEAR(v.exponent_fitted, 0.6, 0.01);
  EXPECT_TRUE(v.pass);
}

TEST(VerifyLsof, RejectsShortGrid) {
  const ProductChain chain(corpus("polya"));
  const Spectrum s = eigen_decompose(chain.intensity());
  EXPECT_THROW(verify_lsof(s.components[0], chain, lsof_grid(4, 5)), PreconditionError);
}
