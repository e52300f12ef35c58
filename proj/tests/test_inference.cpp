#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "emdcor/error.hpp"
#include "emdcor/inference.hpp"
#include "support/generators.hpp"

namespace emdcor {
namespace {

using V = std::vector<double>;

PairedSample identity_sample(std::size_t n) {
  V xs(n);
  std::iota(xs.begin(), xs.end(), 0.0);
  return PairedSample::from_reals(xs, xs);
}

TEST(ReplicatePermutation, IsAPermutationAndReproducible) {
  for (std::uint64_t b = 0; b < 20; ++b) {
    auto p = replicate_permutation(13, 99, b);
    EXPECT_EQ(p, replicate_permutation(13, 99, b));
    std::sort(p.begin(), p.end());
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], i);
  }
  EXPECT_NE(replicate_permutation(13, 99, 0), replicate_permutation(13, 99, 1));
}

TEST(PermutationTest, IdentityPermutationReproducesObserved) {
  RandomStream rng(71);
  const auto s = testing::random_sample(rng, 9);
  std::vector<std::size_t> id(9);
  std::iota(id.begin(), id.end(), std::size_t{0});
  EXPECT_EQ(permuted_ecov(s, id), empirical_ecov(s));
}

TEST(PermutationTest, PerfectDependenceIsDetected) {
  PermutationOptions o;
  o.permutations = 199;
  o.seed = 2024;
  const auto r = permutation_test_ecov(identity_sample(20), o);
  EXPECT_LE(r.p_value, 0.01);
  EXPECT_EQ(r.permutations, 199u);
  EXPECT_EQ(r.seed, 2024u);
}

TEST(PermutationTest, IndependentGridGivesPOne) {
  const auto s = PairedSample::from_reals(V{0, 0, 1, 1}, V{0, 1, 0, 1});
  PermutationOptions o;
  o.permutations = 19;
  const auto r = permutation_test_ecov(s, o);
  EXPECT_EQ(r.observed_statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(PermutationTest, AddOneFormula) {
  RandomStream rng(72);
  const auto s = testing::random_sample(rng, 12);
  PermutationOptions o;
  o.permutations = 49;
  o.seed = 5;
  o.keep_replicates = true;
  const auto r = permutation_test_ecov(s, o);
  ASSERT_EQ(r.replicate_statistics.size(), 49u);
  const auto extreme = std::count_if(
      r.replicate_statistics.begin(), r.replicate_statistics.end(),
      [&](double v) { return v >= r.observed_statistic - 1e-12 * (1 + r.observed_statistic); });
  EXPECT_EQ(r.p_value, static_cast<double>(1 + extreme) / 50.0);
  EXPECT_GT(r.p_value, 0.0);
  EXPECT_LE(r.p_value, 1.0);
  for (std::size_t b = 0; b < 49; ++b) {
    EXPECT_EQ(r.replicate_statistics[b], permuted_ecov(s, replicate_permutation(12, 5, b)));
  }
}

TEST(PermutationTest, ThreadCountDoesNotMatter) {
  RandomStream rng(73);
  const auto s = testing::random_sample(rng, 14);
  PermutationOptions o;
  o.permutations = 59;
  o.seed = 17;
  o.keep_replicates = true;
  const auto one = permutation_test_ecov(s, o);
  o.threads = 4;
  const auto four = permutation_test_ecov(s, o);
  EXPECT_EQ(one.p_value, four.p_value);
  EXPECT_EQ(one.replicate_statistics, four.replicate_statistics);
}

TEST(PermutationTest, Errors) {
  PermutationOptions o;
  EXPECT_THROW(permutation_test_ecov(identity_sample(3), o), Error);
  o.permutations = 18;
  EXPECT_THROW(permutation_test_ecov(identity_sample(8), o), Error);
  o.permutations = 19;
  EXPECT_THROW(permutation_test_ecov(PairedSample::from_reals(V{1, 2, 3, 4}, V{0, 0, 0, 0}), o),
               DegenerateError);
}

TEST(PermutationTest, NullPValuesReachEveryDecile) {
  std::array<int, 10> deciles{};
  PermutationOptions o;
  o.permutations = 39;
  for (std::uint64_t run = 0; run < 200; ++run) {
    auto rng = RandomStream::substream(777, run);
    const auto s = PairedSample::from_reals(testing::uniform_reals(rng, 10),
                                            testing::uniform_reals(rng, 10));
    o.seed = run;
    const double p = permutation_test_ecov(s, o).p_value;
    ++deciles[std::min<std::size_t>(9, static_cast<std::size_t>(std::ceil(p * 10.0)) - 1)];
  }
  for (int count : deciles) EXPECT_GT(count, 0);
}

TEST(MonteCarlo, CubeOneDimension) {
  const auto c = mc_validate_cube(1, 200'000, 3);
  EXPECT_NEAR(c.estimate, 1.0 / 3.0, 3.0 * c.standard_error);
  EXPECT_NEAR(c.quadrature, 1.0 / 3.0, 1e-9);
}

TEST(MonteCarlo, CubeThreeDimensionsWithinBounds) {
  const auto c = mc_validate_cube(3, 100'000, 4);
  EXPECT_GE(c.estimate, std::sqrt(3.0) / 3.0);
  EXPECT_LE(c.estimate, std::sqrt(0.5));
  EXPECT_EQ(c.lower_bound, std::sqrt(3.0) / 3.0);
  EXPECT_EQ(c.upper_bound, std::sqrt(0.5));
}

TEST(MonteCarlo, CubeErrors) {
  EXPECT_THROW(mc_validate_cube(0, 10'000, 1), Error);
  EXPECT_THROW(mc_validate_cube(2, 9'999, 1), Error);
}

TEST(MonteCarlo, GaussianSummary) {
  const auto g = mc_validate_gaussian(0.6, 20, 10, 8);
  EXPECT_EQ(g.ecors.size(), 10u);
  EXPECT_LE(g.q10, g.median);
  EXPECT_LE(g.median, g.q90);
  EXPECT_NEAR(g.bounds.upper, std::sqrt(0.2), 1e-15);
  for (double e : g.ecors) {
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 1.0 + 1e-9);
  }
  const auto again = mc_validate_gaussian(0.6, 20, 10, 8);
  EXPECT_EQ(g.ecors, again.ecors);
}

TEST(MonteCarlo, GaussianErrors) {
  EXPECT_THROW(mc_validate_gaussian(1.0, 20, 5, 1), Error);
  EXPECT_THROW(mc_validate_gaussian(0.5, 9, 5, 1), Error);
  EXPECT_THROW(mc_validate_gaussian(0.5, 20, 0, 1), Error);
}

}  // namespace
}  // namespace emdcor
