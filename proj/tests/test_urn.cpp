#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "polya/errors.hpp"
#include "polya/urn.hpp"

using namespace polya;
using polya::testing::corpus;
using polya::testing::two_colour;

namespace {

UrnSpec classical() { return two_colour({1, 0}, {0, 1}); }

UrnSpec mixed() {
  return make_spec(Eigen::Vector2d(1, 1),
                   {ReplacementDistribution::mixture({{0.5, Eigen::Vector2d(2, 0)}, {0.5, Eigen::Vector2d(0, 2)}}),
                    ReplacementDistribution::fixed(Eigen::Vector2d(0, 2))},
                   Eigen::Vector2d(1, 1));
}

std::string rejection(const UrnSpec& spec) {
  try {
    validate_spec(spec);
  } catch (const InvalidSpec& e) {
    return e.what();
  }
  return "";
}

// Random balanced integer urn: each atom gets nonnegative entries summing
// (with unit activities) to b.
UrnSpec random_balanced(std::mt19937_64& gen, int q, int b) {
  std::uniform_int_distribution<int> colour(0, q - 1), atoms(1, 3);
  std::vector<ReplacementDistribution> laws;
  for (int j = 0; j < q; ++j) {
    const int k = atoms(gen);
    std::vector<Atom> list;
    for (int m = 0; m < k; ++m) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(q);
      for (int unit = 0; unit < b; ++unit) v[colour(gen)] += 1.0;
      list.push_back({1.0 / k, v});
    }
    laws.push_back(ReplacementDistribution::mixture(list));
  }
  return make_spec(Eigen::VectorXd::Ones(q), laws, Eigen::VectorXd::Ones(q));
}

}  // namespace

TEST(ValidateSpec, AcceptsClassicalPolya) { EXPECT_EQ(rejection(classical()), ""); }

TEST(ValidateSpec, RejectsZeroTotalActivity) {
  UrnSpec s = classical();
  s.activities = Eigen::Vector2d(0, 0);
  EXPECT_NE(rejection(s).find("zero total activity"), std::string::npos);
  s.activities = Eigen::Vector2d(1, 0);
  s.initial = Eigen::Vector2d(0, 4);
  EXPECT_NE(rejection(s).find("zero total activity"), std::string::npos);
}

TEST(ValidateSpec, RejectsProbabilityMassShortOfOne) {
  UrnSpec s = classical();
  s.replacements[0] = ReplacementDistribution::mixture({{0.5, Eigen::Vector2d(1, 0)}, {0.4, Eigen::Vector2d(0, 1)}});
  EXPECT_NE(rejection(s).find("probability mass 0.9"), std::string::npos);
}

TEST(ValidateSpec, RejectsDimensionMismatchAndNegatives) {
  UrnSpec s = classical();
  s.initial = Eigen::Vector3d(1, 1, 1);
  EXPECT_NE(rejection(s).find("dimension mismatch"), std::string::npos);

  s = classical();
  s.replacements[1].atoms[0].vector = Eigen::Vector3d(0, 1, 0);
  EXPECT_NE(rejection(s).find("dimension mismatch"), std::string::npos);

  s = classical();
  s.activities[1] = -1.0;
  EXPECT_NE(rejection(s).find("negative activity"), std::string::npos);

  s = classical();
  s.initial[0] = -2.0;
  EXPECT_NE(rejection(s).find("negative initial"), std::string::npos);

  s = make_spec(Eigen::VectorXd::Ones(1), {ReplacementDistribution::fixed(Eigen::VectorXd::Ones(1))},
                Eigen::VectorXd::Ones(1));
  EXPECT_NE(rejection(s).find("at least 2 colours"), std::string::npos);
}

TEST(CheckBalanced, ClassicalHasUnitBalance) {
  const auto c = check_balanced(classical());
  EXPECT_TRUE(c.balanced);
  EXPECT_EQ(c.b, 1.0);
  EXPECT_EQ(c.worst_deviation, 0.0);
}

TEST(CheckBalanced, RandomReplacementAtomsAllAddTwo) {
  const auto c = check_balanced(mixed());
  EXPECT_TRUE(c.balanced);
  EXPECT_EQ(c.b, 2.0);
}

TEST(CheckBalanced, UnbalancedReportsHalfWidth) {
  const auto c = check_balanced(two_colour({1, 0}, {2, 0}));
  EXPECT_FALSE(c.balanced);
  EXPECT_DOUBLE_EQ(c.worst_deviation, 0.5);
  EXPECT_DOUBLE_EQ(c.b, 1.5);
}

TEST(CheckBalanced, ToleranceIsRelativeToB) {
  UrnSpec s = two_colour({1000, 0}, {0, 1000});
  s.replacements[1].atoms[0].vector[1] += 1e-10;  // 1e-13 relative
  EXPECT_TRUE(check_balanced(s).balanced);
  s.replacements[1].atoms[0].vector[1] += 1e-8;
  EXPECT_FALSE(check_balanced(s).balanced);
}

TEST(CheckBalanced, InvariantUnderColourPermutation) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    UrnSpec s = random_balanced(gen, 3, 1 + trial % 4);
    s.activities = Eigen::Vector3d(1, 2, 0.5);
    const auto before = check_balanced(s);
    for (const std::vector<int>& perm : {std::vector<int>{1, 2, 0}, std::vector<int>{2, 1, 0}}) {
      const auto after = check_balanced(permute_colours(s, perm));
      EXPECT_EQ(before.balanced, after.balanced);
      EXPECT_DOUBLE_EQ(before.b, after.b);
      EXPECT_DOUBLE_EQ(before.worst_deviation, after.worst_deviation);
    }
  }
}

TEST(StaticTenability, NonnegativeAtomsAreTenable) {
  EXPECT_EQ(static_tenability_check(classical()), Tenability::provably_tenable);
}

TEST(StaticTenability, IntegerRemovalBoundedByGcd) {
  const UrnSpec s = two_colour({-1, 2}, {1, 0}, {3, 1});
  EXPECT_EQ(static_tenability_check(s), Tenability::provably_tenable);
}

TEST(StaticTenability, RealRemovalIsUnknown) {
  EXPECT_EQ(static_tenability_check(two_colour({-0.5, 1.5}, {0, 1})), Tenability::unknown);
}

TEST(StaticTenability, RemovalBeyondGcdIsUnknown) {
  EXPECT_EQ(static_tenability_check(two_colour({-2, 3}, {0, 1})), Tenability::unknown);
  // Even counts with removals of two are fine.
  EXPECT_EQ(static_tenability_check(two_colour({-2, 3}, {2, 0}, {4, 1})), Tenability::provably_tenable);
}

TEST(IntensityMatrix, ExamplesFromTheModel) {
  EXPECT_TRUE(intensity_matrix(classical()).isApprox(Eigen::Matrix2d::Identity()));
  Eigen::Matrix2d friedman;
  friedman << 0, 1, 1, 0;
  EXPECT_EQ(intensity_matrix(two_colour({0, 1}, {1, 0})), Eigen::MatrixXd(friedman));
  Eigen::Matrix2d m;
  m << 1, 0, 1, 2;
  EXPECT_EQ(intensity_matrix(mixed()), Eigen::MatrixXd(m));
}

TEST(IntensityMatrix, ActivityIsLeftEigenvectorForBalancedUrns) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int q = 2 + trial % 4;
    const UrnSpec s = random_balanced(gen, q, 1 + trial % 5);
    const auto cert = check_balanced(s);
    ASSERT_TRUE(cert.balanced);
    const Eigen::RowVectorXd lhs = s.activities.transpose() * intensity_matrix(s);
    EXPECT_LE((lhs - cert.b * s.activities.transpose()).norm(), 1e-12 * cert.b);
  }
  for (const auto& name : polya::testing::balanced_corpus()) {
    const UrnSpec s = corpus(name);
    const double b = check_balanced(s).b;
    EXPECT_LE((s.activities.transpose() * intensity_matrix(s) - b * s.activities.transpose()).norm(), 1e-12 * b)
        << name;
  }
}

TEST(IntensityMatrix, LinearInAtomProbability) {
  UrnSpec s = mixed();
  const Eigen::MatrixXd before = intensity_matrix(s);
  const double delta = 0.125;
  s.replacements[0].atoms[0].probability += delta;
  s.replacements[0].atoms[1].probability -= delta;
  const Eigen::MatrixXd after = intensity_matrix(s);
  const Eigen::VectorXd expected = delta * s.activities[0] *
                                   (s.replacements[0].atoms[0].vector - s.replacements[0].atoms[1].vector);
  EXPECT_LE((after.col(0) - before.col(0) - expected).norm(), 1e-15);
  EXPECT_EQ(after.col(1), before.col(1));
}

TEST(TotalWeight, Examples) {
  EXPECT_EQ(total_weight(classical(), 0), 2.0);
  EXPECT_EQ(total_weight(classical(), 10), 12.0);
  EXPECT_EQ(total_weight(two_colour({4, 1}, {1, 4}), 3), 17.0);
}

TEST(TotalWeight, IncrementsByExactlyB) {
  const auto w = weight_schedule(two_colour({4, 1}, {1, 4}));
  for (long n = 0; n < 100000; n += 997) EXPECT_EQ(w(n + 1) - w(n), 5.0);
}

TEST(TotalWeight, RefusesUnbalancedUrn) {
  EXPECT_THROW(total_weight(two_colour({1, 0}, {2, 0}), 3), NotBalanced);
}

TEST(Irreducible, DetectsReachability) {
  EXPECT_TRUE(is_irreducible(intensity_matrix(two_colour({0, 1}, {1, 0}))));
  EXPECT_FALSE(is_irreducible(intensity_matrix(two_colour({3, 0}, {2, 1}))));
  EXPECT_FALSE(is_irreducible(intensity_matrix(classical())));
}
