#include <gtest/gtest.h>

#include "corpus.hpp"
#include "polya/errors.hpp"
#include "polya/linalg.hpp"
#include "polya/verdicts.hpp"

using namespace polya;
using polya::testing::corpus;

namespace {

std::vector<Eigen::VectorXd> means_for(const UrnSpec& spec, const std::vector<long>& grid) {
  ProductChain chain(spec);
  return mean_series(chain, spec.initial, grid);
}

UrnClassification classification_of(const UrnSpec& s) {
  return classify_urn(eigen_decompose(intensity_matrix(s)), check_balanced(s).b);
}

MomentReport synthetic_report(const std::vector<long>& n, const std::vector<double>& scale) {
  MomentReport r;
  for (std::size_t k = 0; k < n.size(); ++k) {
    r.grid.push_back(MomentPoint{n[k], 1.0, 0.0});
    Eigen::MatrixXd c(2, 2);
    c << 1, -1, -1, 1;
    r.covariance.push_back(scale[k] * c);
    r.covariance_se.push_back(Eigen::MatrixXd::Constant(2, 2, 0.01 * scale[k]));
  }
  return r;
}

}  // namespace

TEST(Centring, ActivityResidualIsRoundoffForBalancedUrns) {
  for (const auto& name : polya::testing::balanced_corpus()) {
    const UrnSpec s = corpus(name);
    const auto batch = run_batch(s, 2000, 20, 43);
    const auto means = means_for(s, batch_grid(batch));
    const ProductChain chain(s);
    EXPECT_LE(activity_centring_residual(batch, means, s.activities, chain.weights()), 1e-12) << name;
    const Spectrum sp = eigen_decompose(chain.intensity());
    const auto& principal = sp.at(Complex(check_balanced(s).b, 0));
    if (principal.alg_mult > 1) continue;  // P is then more than the activity direction
    EXPECT_LE(projection_centring_residual(batch, means, principal.P, chain.weights()), 1e-10) << name;
  }
}

TEST(Centring, DetectsWrongMean) {
  const UrnSpec s = corpus("polya");
  const auto batch = run_batch(s, 16, 5, 1);
  auto means = means_for(s, batch_grid(batch));
  means.back()[0] += 1.0;
  const ProductChain chain(s);
  EXPECT_NEAR(activity_centring_residual(batch, means, s.activities, chain.weights()), 1.0 / 18.0, 1e-12);
}

TEST(CovarianceCheck, SmallUrnStabilizesUnderLinearScaling) {
  const UrnClassification small = classification_of(corpus("friedman"));
  const auto stable = synthetic_report({10, 100, 1000, 10000}, {10, 100, 1000, 10000});
  const auto v = theorem_t3_check(stable, small);
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.n_last, 10000);
  EXPECT_EQ(v.n_prev, 1000);
  EXPECT_NEAR(v.relative_change, 0.0, 1e-15);
  EXPECT_NEAR(v.noise_allowance, 3 * std::hypot(0.02, 0.02) / 2.0, 1e-12);
  EXPECT_FALSE(v.max_reference_z);

  const auto drifting = synthetic_report({10, 100, 1000, 10000}, {10, 100, 1000, 20000});
  EXPECT_FALSE(theorem_t3_check(drifting, small).pass);
}

TEST(CovarianceCheck, CriticalUrnUsesTheLogFactor) {
  const UrnClassification critical = classification_of(corpus("critical"));
  std::vector<long> n{16, 256, 4096, 65536};
  std::vector<double> linear, with_log;
  for (const long x : n) {
    linear.push_back(double(x));
    with_log.push_back(double(x) * std::log(double(x)));
  }
  EXPECT_TRUE(theorem_t3_check(synthetic_report(n, with_log), critical).pass);
  EXPECT_FALSE(theorem_t3_check(synthetic_report(n, linear), critical).pass);
}

TEST(CovarianceCheck, ReferenceSigma) {
  const UrnClassification small = classification_of(corpus("friedman"));
  auto r = synthetic_report({10, 100, 1000}, {10, 100, 1000});
  Eigen::MatrixXd sigma(2, 2);
  sigma << 1, -1, -1, 1;
  r.reference_sigma = sigma;
  auto v = theorem_t3_check(r, small);
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(*v.max_reference_z, 0.0);
  r.reference_sigma = 1.1 * sigma;  // 10 standard errors off
  v = theorem_t3_check(r, small);
  EXPECT_FALSE(v.pass);
  EXPECT_NEAR(*v.max_reference_z, 10.0, 1e-9);
}

TEST(CovarianceCheck, Preconditions) {
  const auto r = synthetic_report({10, 100, 1000}, {10, 100, 1000});
  EXPECT_THROW(theorem_t3_check(r, classification_of(corpus("large"))), PreconditionError);
  EXPECT_THROW(theorem_t3_check(r, classification_of(corpus("polya"))), PreconditionError);
  MomentReport bare = r;
  bare.covariance.clear();
  EXPECT_THROW(theorem_t3_check(bare, classification_of(corpus("friedman"))), PreconditionError);
  EXPECT_THROW(theorem_t3_check(synthetic_report({10, 20, 40}, {1, 2, 4}), classification_of(corpus("friedman"))),
               PreconditionError);
}

TEST(CovarianceCheck, SimulatedFriedmanUrn) {
  const UrnSpec s = corpus("friedman");
  const auto batch = run_batch(s, 8192, 4000, 47);
  const auto report = mc_central_moment(batch, means_for(s, batch_grid(batch)), 2.0);
  const auto v = theorem_t3_check(report, classification_of(s));
  EXPECT_TRUE(v.pass) << v.relative_change;
  // Sigma for Friedman's urn is (1/12) [[1,-1],[-1,1]].
  EXPECT_NEAR(v.normalized_last(0, 0), 1.0 / 12.0, 0.01);
}

TEST(CoinFlip, SquareFunctionIsConstant) {
  const auto s = coin_flip_martingale(64, 200, 3, {2.0, 4.0});
  ASSERT_EQ(s.terminal.size(), 200u);
  EXPECT_NEAR(s.weight_square_sum, 1.0, 1e-12);
  for (const double v : s.square_function) EXPECT_EQ(v, 1.0);
  for (const auto& t : s.terminal) EXPECT_LE(std::abs(t[0]), 8.0 + 1e-12);
  EXPECT_EQ(s.increment_power_means.at(4.0).size(), 64u);
}

TEST(Burkholder, CoinFlipAttainsEqualityAtTwo) {
  const auto s = coin_flip_martingale(256, 10000, 5, {2.0, 4.0});
  const auto v2 = burkholder_check(s, 2.0, BootstrapOptions{200, 1});
  EXPECT_TRUE(v2.pass());
  EXPECT_NEAR(v2.martingale_norm, 1.0, 4 * v2.martingale_se);
  EXPECT_EQ(v2.square_norm, 1.0);
  EXPECT_NEAR(v2.empirical_cp, 1.0, 4 * v2.martingale_se);
  const auto v4 = burkholder_check(s, 4.0, BootstrapOptions{200, 1});
  EXPECT_TRUE(v4.pass());
  EXPECT_GT(v4.margin_z, 10.0);
}

TEST(Burkholder, Preconditions) {
  const auto s = coin_flip_martingale(16, 200, 5, {2.0});
  EXPECT_THROW(burkholder_check(s, 1.5), PreconditionError);
  EXPECT_THROW(burkholder_check(s, 4.0), PreconditionError);  // orders not recorded
  auto heavy = s;
  heavy.weight_square_sum = 2.0;
  EXPECT_THROW(burkholder_check(heavy, 2.0), PreconditionError);
  EXPECT_THROW(burkholder_check(coin_flip_martingale(16, 99, 5, {2.0}), 2.0), PreconditionError);
}

TEST(Burkholder, FlagsAViolation) {
  // Terminal values far above the square function.
  auto s = coin_flip_martingale(16, 200, 5, {2.0});
  for (auto& t : s.terminal) t[0] = 5.0;
  const auto v = burkholder_check(s, 2.0);
  EXPECT_FALSE(v.burkholder_pass);
  EXPECT_FALSE(v.ll2_pass);
}

TEST(ProductWeights, NormalizedAndRecoverTheDeviation) {
  const UrnSpec s = corpus("large");
  const ProductChain chain(s);
  const long n = 200;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(2, 2);
  const auto w = normalized_product_weights(chain, I, n);
  ASSERT_EQ(w.size(), std::size_t(n));
  double total = 0.0;
  for (const auto& a : w) total += std::pow(operator_norm(a), 2);
  EXPECT_NEAR(total, 1.0, 1e-12);

  // Sum A_i Y_i is X_n - E X_n up to the normalizing constant.
  double unnormalized = 0.0;
  for (long i = 1; i <= n; ++i) unnormalized += std::pow(operator_norm(chain.product(i, n)), 2);
  const double c = std::sqrt(unnormalized);
  const auto sample = urn_martingale(s, w, 3, 53, {2.0}, 1);
  for (std::size_t r = 0; r < 3; ++r) {
    const Trajectory t = run_path(s, n, StreamKey{53, r, kSimulationStream});
    const Eigen::VectorXd dev = t.final_state() - exact_mean(s, n);
    EXPECT_LE((c * sample.terminal[r] - dev.cast<Complex>()).norm(), 1e-8 * (1 + dev.norm()));
  }
}

TEST(UrnMartingale, IndependentOfWorkers) {
  const UrnSpec s = corpus("friedman");
  const ProductChain chain(s);
  const Spectrum sp = eigen_decompose(chain.intensity());
  const auto w = normalized_product_weights(chain, sp.at(-1.0).P, 128);
  const auto a = urn_martingale(s, w, 300, 59, {2.0, 4.0}, 1);
  const auto b = urn_martingale(s, w, 300, 59, {2.0, 4.0}, 4);
  for (std::size_t r = 0; r < 300; ++r) {
    EXPECT_EQ(a.terminal[r], b.terminal[r]);
    EXPECT_EQ(a.square_function[r], b.square_function[r]);
  }
  EXPECT_EQ(a.increment_power_means, b.increment_power_means);
  EXPECT_TRUE(burkholder_check(a, 2.0).burkholder_pass);
}
