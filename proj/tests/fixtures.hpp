// Shared fixtures for the test suites.
#ifndef MARWEIGHT_TESTS_FIXTURES_HPP
#define MARWEIGHT_TESTS_FIXTURES_HPP

#include <cmath>
#include <vector>

#include "marweight/filtration_tree.hpp"
#include "marweight/random.hpp"
#include "marweight/simple_function.hpp"

namespace marweight::testing {

/// Two leaves {a, b} with mass 1/2 each; P_0 = {Omega}, P_1 singletons.
inline filtration_tree unit2() { return build_dyadic(1); }

/// Four leaves {a, b, c, d} with mass 1/4 each; P_1 = {{a,b},{c,d}}.
inline filtration_tree dy4() { return build_dyadic(2); }

/// omega1 = omega2 = v = (3/2, 1/2) on unit2.
inline weight fix_w() { return weight{1.5, 0.5}; }

/// Dual weights (3/2, 1/2) and (1/2, 3/2) at p1 = p2 = 2, i.e. omega_i = sigma_i^-1.
inline weight fix_rh_omega1() { return weight{2.0 / 3.0, 2.0}; }
inline weight fix_rh_omega2() { return weight{2.0, 2.0 / 3.0}; }

/// A tree with a non-trivial P_0 and an uneven branching pattern, 7 leaves.
inline filtration_tree lopsided7() {
  std::vector<double> masses{0.05, 0.15, 0.1, 0.2, 0.1, 0.3, 0.1};
  std::vector<partition> levels{
      {{0, 1, 2, 3}, {4, 5, 6}},
      {{0}, {1, 2, 3}, {4, 5, 6}},
      {{0}, {1}, {2, 3}, {4}, {5, 6}},
      {{0}, {1}, {2}, {3}, {4}, {5}, {6}},
  };
  return filtration_tree(std::move(masses), std::move(levels));
}

/// Dyadic tree with random positive masses.
inline filtration_tree random_dyadic(std::size_t depth, rng_engine& rng) {
  const std::size_t leaves = std::size_t{1} << depth;
  std::vector<double> masses(leaves);
  double total = 0;
  for (auto& m : masses) {
    m = 0.05 + uniform01(rng);
    total += m;
  }
  for (auto& m : masses) m /= total;
  return build_dyadic(depth, std::optional<std::vector<double>>(std::move(masses)));
}

inline simple_function random_function(std::size_t leaves, rng_engine& rng, bool nonneg = false, double zero_prob = 0.2) {
  std::vector<double> out(leaves);
  for (auto& x : out) {
    if (bernoulli(rng, zero_prob)) {
      x = 0;
      continue;
    }
    x = log_normal(rng, 1.0);
    if (!nonneg && bernoulli(rng, 0.5)) x = -x;
  }
  return simple_function(std::move(out));
}

inline weight random_weight(std::size_t leaves, rng_engine& rng, double sigma = 1.0) {
  std::vector<double> out(leaves);
  for (auto& x : out) x = log_normal(rng, sigma);
  return weight(std::move(out));
}

}  // namespace marweight::testing

#endif
