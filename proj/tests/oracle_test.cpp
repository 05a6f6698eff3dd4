#include "marweight/oracle.hpp"

#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace marweight {
namespace {

using testing::dy4;
using testing::unit2;

TEST(StoppingTimeOracle, FixtureCounts) {
  const auto u2 = weight::unit(2);
  const auto r2 = stopping_time_oracle(unit2(), u2, u2, u2, exponent_config(2, 2));
  EXPECT_EQ(r2.stopping_times, 5u);
  EXPECT_EQ(r2.recursion_count, 5u);
  EXPECT_EQ(r2.subsets, 3u);
  EXPECT_TRUE(r2.passed());

  const auto u4 = weight::unit(4);
  const auto r4 = stopping_time_oracle(dy4(), u4, u4, u4, exponent_config(2, 2));
  EXPECT_EQ(r4.stopping_times, 26u);
  EXPECT_TRUE(r4.passed());
  for (const auto& c : r4.comparisons) EXPECT_NEAR(c.by_subsets.value, 1.0, 1e-12);
}

TEST(StoppingTimeOracle, FixRhWitnessIsOmega) {
  const auto res = stopping_time_oracle(unit2(), weight::unit(2), testing::fix_rh_omega1(), testing::fix_rh_omega2(),
                                        exponent_config(2, 2));
  ASSERT_TRUE(res.passed());
  const auto& rh = res.comparisons[0];
  EXPECT_EQ(rh.condition, "RH");
  EXPECT_NEAR(rh.by_stopping_times.value, 2 / std::sqrt(3.0), 1e-12);
  EXPECT_EQ(rh.by_stopping_times.witness, (leaf_set{0, 1}));
}

TEST(StoppingTimeOracle, RandomTreesUpToTwelveLeaves) {
  auto rng = make_rng(97);
  std::vector<filtration_tree> trees{unit2(), dy4(), testing::lopsided7(), build_dyadic(3),
                                     build_regular({3, 4}), build_regular({2, 2, 3}), build_regular({12})};
  for (int i = 0; i < 6; ++i) trees.push_back(testing::random_dyadic(static_cast<std::size_t>(i % 4), rng));
  for (const auto& tree : trees) {
    const auto n = tree.leaf_count();
    for (int rep = 0; rep < 3; ++rep) {
      const exponent_config e(uniform(rng, 1.2, 6), uniform(rng, 1.2, 6));
      const auto res = stopping_time_oracle(tree, testing::random_weight(n, rng), testing::random_weight(n, rng),
                                            testing::random_weight(n, rng), e);
      EXPECT_TRUE(res.passed()) << n << " leaves";
      EXPECT_EQ(res.stopping_times, count_stopping_times(tree));
    }
  }
}

TEST(StoppingTimeOracle, Cap) {
  const auto u = weight::unit(16);
  try {
    stopping_time_oracle(build_dyadic(4), u, u, u, exponent_config(2, 2));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::cap_exceeded);
  }
  EXPECT_NO_THROW(stopping_time_oracle(build_dyadic(4), u, u, u, exponent_config(2, 2), 16));
}

TEST(TieBreak, UnitWeightsPickTheSmallestSet) {
  // Every subset ties on unit weights; rounding must not pick an arbitrary one.
  const auto u = weight::unit(4);
  EXPECT_EQ(rh_constant(dy4(), u, u, exponent_config(2, 2)).witness, (leaf_set{0}));
  EXPECT_EQ(s_vec_p_constant(dy4(), u, u, u, exponent_config(2, 3)).witness, (leaf_set{0}));
}

}  // namespace
}  // namespace marweight
