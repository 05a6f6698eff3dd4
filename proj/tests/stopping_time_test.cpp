#include "marweight/stopping_time.hpp"

#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"

namespace marweight {
namespace {

using testing::dy4;
using testing::unit2;

constexpr int inf = stopping_time::never;

// Oracle: all leaf -> {0..N, inf} assignments filtered by measurability of {tau <= n}.
std::set<std::vector<int>> brute_force_stopping_times(const filtration_tree& tree) {
  const std::size_t leaves = tree.leaf_count();
  const std::size_t choices = tree.level_count() + 1;
  std::set<std::vector<int>> out;
  std::vector<std::size_t> digits(leaves, 0);
  while (true) {
    std::vector<int> tau(leaves);
    for (std::size_t i = 0; i < leaves; ++i) tau[i] = digits[i] == tree.level_count() ? inf : static_cast<int>(digits[i]);
    bool ok = true;
    for (std::size_t n = 0; n < tree.level_count() && ok; ++n) {
      for (const auto& atom : tree.atoms(n)) {
        std::size_t hit = 0;
        for (auto leaf : atom) hit += tau[leaf] != inf && tau[leaf] <= static_cast<int>(n);
        if (hit != 0 && hit != atom.size()) ok = false;
      }
    }
    if (ok) out.insert(tau);
    std::size_t k = 0;
    while (k < leaves && ++digits[k] == choices) digits[k++] = 0;
    if (k == leaves) break;
  }
  return out;
}

TEST(IsStoppingTime, Examples) {
  EXPECT_TRUE(is_stopping_time(dy4(), std::vector<int>{1, 1, 2, inf}).valid);
  const auto bad = is_stopping_time(dy4(), std::vector<int>{1, inf, inf, inf});
  EXPECT_FALSE(bad.valid);
  ASSERT_FALSE(bad.violations.empty());
  EXPECT_EQ(bad.violations.front().level, 1u);
  EXPECT_TRUE(is_stopping_time(dy4(), stopping_time::constant(4, inf)).valid);
  EXPECT_TRUE(is_stopping_time(dy4(), stopping_time::constant(4, 0)).valid);
  EXPECT_FALSE(is_stopping_time(dy4(), std::vector<int>{1, 1, 2}).valid);
  EXPECT_FALSE(is_stopping_time(dy4(), std::vector<int>{3, 3, 3, 3}).valid);
  EXPECT_THROW(require_stopping_time(dy4(), stopping_time(std::vector<int>{1, inf, inf, inf})), error);
}

TEST(CountStoppingTimes, Examples) {
  EXPECT_EQ(count_stopping_times(unit2()), 5u);
  EXPECT_EQ(count_stopping_times(dy4()), 26u);
  EXPECT_EQ(count_stopping_times(build_dyadic(0)), 2u);
  EXPECT_EQ(count_stopping_times(build_dyadic(3)), 26u * 26u + 1u);
}

TEST(EnumerateStoppingTimes, MatchesBruteForce) {
  for (const auto& tree : {build_dyadic(0), unit2(), dy4(), build_regular(std::vector<std::size_t>{3, 2}),
                           testing::lopsided7()}) {
    const auto all = enumerate_stopping_times(tree);
    std::set<std::vector<int>> seen;
    for (const auto& tau : all) {
      EXPECT_TRUE(is_stopping_time(tree, tau).valid);
      seen.insert(tau.values());
    }
    EXPECT_EQ(seen.size(), all.size()) << "duplicates";
    EXPECT_EQ(all.size(), count_stopping_times(tree));
    EXPECT_EQ(seen, brute_force_stopping_times(tree));
  }
}

TEST(EnumerateStoppingTimes, CapIsEnforced) {
  try {
    enumerate_stopping_times(build_dyadic(4), 1000);
    FAIL() << "expected TooManyStoppingTimes";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::too_many_stopping_times);
  }
}

TEST(HittingTime, Examples) {
  // Condition: E_n f > 1 for f = (4,0,0,0): level 0 gives 1 (not > 1), level 1 gives (2,2,0,0).
  const simple_function f{4, 0, 0, 0};
  std::vector<simple_function> levels;
  for (std::size_t n = 0; n <= 2; ++n) levels.push_back(conditional_expectation(dy4(), f, n));
  const auto tau = hitting_time_above(dy4(), levels, 1.0);
  EXPECT_EQ(tau.values(), (std::vector<int>{1, 1, inf, inf}));
  EXPECT_TRUE(is_stopping_time(dy4(), tau).valid);
  EXPECT_EQ(hitting_time_above(dy4(), levels, 1.0, false).values(), (std::vector<int>{0, 0, 0, 0}));
  EXPECT_THROW(hitting_time(dy4(), std::vector<std::vector<bool>>(2, std::vector<bool>(4))), error);
  // Not adapted: condition at level 1 differs inside atom {a, b}.
  std::vector<std::vector<bool>> bad(3, std::vector<bool>(4, false));
  bad[1][0] = true;
  EXPECT_THROW(hitting_time(dy4(), bad), error);
}

TEST(HittingTime, RandomAdaptedConditionsGiveStoppingTimes) {
  auto rng = make_rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto tree = testing::random_dyadic(bounded(rng, 5), rng);
    const auto f = testing::random_function(tree.leaf_count(), rng);
    std::vector<simple_function> levels;
    for (std::size_t n = 0; n <= tree.depth(); ++n) levels.push_back(absolute(conditional_expectation(tree, f, n)));
    const double lambda = uniform(rng, 0, 3);
    const auto tau = hitting_time_above(tree, levels, lambda);
    EXPECT_TRUE(is_stopping_time(tree, tau).valid);
    for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf) {
      int first = inf;
      for (std::size_t n = 0; n <= tree.depth(); ++n) {
        if (levels[n][leaf] > lambda) {
          first = static_cast<int>(n);
          break;
        }
      }
      EXPECT_EQ(tau[leaf], first);
    }
  }
}

TEST(StoppedValue, Examples) {
  const simple_function f{4, 0, 0, 0};
  const auto s = stopped_value(dy4(), f, stopping_time(std::vector<int>{1, 1, 2, inf}));
  EXPECT_EQ(s.values, (simple_function{2, 2, 0, 0}));
  EXPECT_EQ(s.defined, (std::vector<bool>{true, true, true, false}));
  const auto all = stopped_value(dy4(), f, stopping_time::constant(4, 0));
  EXPECT_EQ(all.values, simple_function::constant(4, 1.0));
  EXPECT_THROW(stopped_value(dy4(), f, stopping_time(std::vector<int>{1, inf, inf, inf})), error);
}

TEST(FromSet, Example) {
  const auto tau = from_set(dy4(), leaf_set{0, 2});
  EXPECT_EQ(tau.values(), (std::vector<int>{2, inf, 2, inf}));
  EXPECT_EQ(tau.active_set(), (leaf_set{0, 2}));
  EXPECT_TRUE(is_stopping_time(dy4(), tau).valid);
  EXPECT_THROW(from_set(dy4(), leaf_set{5}), error);
}

TEST(Antichain, Example) {
  const auto nodes = antichain(dy4(), stopping_time(std::vector<int>{1, 1, 2, inf}));
  ASSERT_EQ(nodes.size(), 2u);
  EXPECT_EQ(nodes[0].level, 1u);
  EXPECT_EQ(nodes[0].index, 0u);
  EXPECT_EQ(nodes[1].level, 2u);
  EXPECT_EQ(nodes[1].index, 2u);
}

TEST(OptimalStopping, MatchesEnumeration) {
  auto rng = make_rng(12);
  for (int trial = 0; trial < 150; ++trial) {
    const auto tree = trial % 5 == 0 ? testing::lopsided7() : testing::random_dyadic(bounded(rng, 4), rng);
    std::vector<simple_function> payoffs;
    for (std::size_t n = 0; n <= tree.depth(); ++n) {
      // Payoffs measurable at level n, as they are in every use.
      payoffs.push_back(absolute(conditional_expectation(tree, testing::random_function(tree.leaf_count(), rng), n)));
    }
    double best = 0;
    for_each_stopping_time(tree, [&](const stopping_time& tau) {
      double total = 0;
      for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf) {
        if (tau.finite_at(leaf)) total += payoffs[static_cast<std::size_t>(tau[leaf])][leaf] * tree.mass(leaf);
      }
      best = std::max(best, total);
    });
    const auto dp = optimal_stopping(tree, payoffs);
    EXPECT_TRUE(nearly_equal(dp.value, best));
    EXPECT_TRUE(is_stopping_time(tree, dp.tau).valid);
    double achieved = 0;
    for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf) {
      if (dp.tau.finite_at(leaf)) achieved += payoffs[static_cast<std::size_t>(dp.tau[leaf])][leaf] * tree.mass(leaf);
    }
    EXPECT_TRUE(nearly_equal(achieved, dp.value));
  }
}

TEST(RandomStoppingTime, AlwaysValid) {
  auto rng = make_rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const auto tree = trial % 3 == 0 ? testing::lopsided7() : testing::random_dyadic(bounded(rng, 6), rng);
    EXPECT_TRUE(is_stopping_time(tree, random_stopping_time(tree, rng)).valid);
  }
}

}  // namespace
}  // namespace marweight
