#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "polya/errors.hpp"
#include "polya/spec_io.hpp"

using namespace polya;

namespace {

bool identical(const UrnSpec& x, const UrnSpec& y) {
  if (x.colors != y.colors || x.activities != y.activities || x.initial != y.initial) return false;
  if (x.replacements.size() != y.replacements.size()) return false;
  for (std::size_t j = 0; j < x.replacements.size(); ++j) {
    const auto& a = x.replacements[j];
    const auto& b = y.replacements[j];
    if (a.deterministic != b.deterministic || a.atoms.size() != b.atoms.size()) return false;
    for (std::size_t k = 0; k < a.atoms.size(); ++k)
      if (a.atoms[k].probability != b.atoms[k].probability || a.atoms[k].vector != b.atoms[k].vector) return false;
  }
  return true;
}

const char* kMixed = R"({
  "colors": ["white", "black"],
  "activities": [1, 0.3],
  "initial": [0.1, 2.5],
  "replacements": [
    {"atoms": [{"p": 0.3333333333333333, "v": [2, 0]}, {"p": 0.6666666666666667, "v": [0.1, 6.333333333333333]}]},
    {"deterministic": [0, 6.666666666666667]}
  ]
})";

}  // namespace

TEST(SpecIo, ParsesBothLawForms) {
  const UrnSpec s = parse_spec(kMixed);
  ASSERT_EQ(s.colours(), 2);
  EXPECT_EQ(s.colors, (std::vector<std::string>{"white", "black"}));
  EXPECT_EQ(s.replacements[0].atoms.size(), 2u);
  EXPECT_FALSE(s.replacements[0].deterministic);
  EXPECT_TRUE(s.replacements[1].deterministic);
  EXPECT_EQ(s.replacements[1].atoms[0].probability, 1.0);
  EXPECT_EQ(s.initial[0], 0.1);
}

TEST(SpecIo, RoundTripIsBitExact) {
  const UrnSpec s = parse_spec(kMixed);
  const std::string text = serialize_spec(s);
  const UrnSpec back = parse_spec(text);
  EXPECT_TRUE(identical(s, back));
  EXPECT_EQ(serialize_spec(back), text);
}

TEST(SpecIo, RoundTripOfRandomDoubles) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = u(gen), y = u(gen), p = std::uniform_real_distribution<double>(0.01, 0.99)(gen);
    UrnSpec s = make_spec(Eigen::Vector2d(u(gen), u(gen) + 0.1),
                          {ReplacementDistribution::mixture({{p, Eigen::Vector2d(x, y)}, {1.0 - p, Eigen::Vector2d(y, x)}}),
                           ReplacementDistribution::fixed(Eigen::Vector2d(y, x))},
                          Eigen::Vector2d(u(gen) + 0.1, u(gen)));
    const double mass = s.replacements[0].total_mass();
    if (std::abs(mass - 1.0) > kProbabilityTolerance) continue;
    const UrnSpec back = parse_spec(serialize_spec(s));
    EXPECT_TRUE(identical(s, back));
  }
}

TEST(SpecIo, CorpusFilesRoundTrip) {
  for (const auto& name : polya::testing::balanced_corpus()) {
    const UrnSpec s = polya::testing::corpus(name);
    EXPECT_TRUE(identical(s, parse_spec(serialize_spec(s)))) << name;
  }
  const UrnSpec u = polya::testing::corpus("unbalanced");
  EXPECT_TRUE(identical(u, parse_spec(serialize_spec(u))));
}

TEST(SpecIo, ReportsMalformedInput) {
  EXPECT_THROW(parse_spec("{"), InvalidSpec);
  EXPECT_THROW(parse_spec(R"({"colors": ["a","b"], "activities": [1,1], "initial": [1,1]})"), InvalidSpec);
  EXPECT_THROW(parse_spec(R"({"colors": ["a","b"], "activities": [1,"x"], "initial": [1,1],
                              "replacements": [{"deterministic": [1,0]}, {"deterministic": [0,1]}]})"),
               InvalidSpec);
  EXPECT_THROW(parse_spec(R"({"colors": ["a","b"], "activities": [1,1], "initial": [1,1],
                              "replacements": [{"atoms": [{"p": 0.5, "v": [1,0]}, {"p": 0.4, "v": [0,1]}]},
                                               {"deterministic": [0,1]}]})"),
               InvalidSpec);
  EXPECT_THROW(load_spec("/nonexistent/urn.json"), InvalidSpec);
}

TEST(SpecIo, DigestIdentifiesContent) {
  const UrnSpec a = polya::testing::corpus("friedman");
  const UrnSpec b = polya::testing::corpus("polya");
  EXPECT_EQ(spec_digest(a), spec_digest(parse_spec(serialize_spec(a))));
  EXPECT_NE(spec_digest(a), spec_digest(b));
  EXPECT_EQ(spec_digest_hex(a).size(), 16u);
}
