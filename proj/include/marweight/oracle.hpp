// Cross-check: set suprema over stopping-time active sets against suprema over leaf subsets.
#ifndef MARWEIGHT_ORACLE_HPP
#define MARWEIGHT_ORACLE_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "marweight/conditions.hpp"
#include "marweight/error.hpp"
#include "marweight/filtration_tree.hpp"
#include "marweight/norms.hpp"
#include "marweight/stopping_time.hpp"

namespace marweight {

inline constexpr std::size_t default_oracle_cap = 12;

struct oracle_comparison {
  std::string condition;
  condition_constant by_subsets;
  condition_constant by_stopping_times;
  bool values_agree = false;
  bool witnesses_agree = false;

  bool agree() const { return values_agree && witnesses_agree; }
};

struct oracle_result {
  std::uint64_t stopping_times = 0;
  std::uint64_t recursion_count = 0;
  std::uint64_t subsets = 0;
  std::vector<oracle_comparison> comparisons;

  bool passed() const {
    if (stopping_times != recursion_count) return false;
    for (const auto& c : comparisons)
      if (!c.agree()) return false;
    return true;
  }
};

namespace detail {

/// Scans the distinct active sets {tau < inf} in the same order and with the same tie rule as the
/// subset enumeration, so equal suprema come with equal witnesses.
template <class Ratio>
condition_constant stopping_time_supremum(const filtration_tree& tree, const Ratio& ratio, std::string name,
                                          std::uint64_t& visited) {
  std::set<indicator, decltype(&set_less)> active(&set_less);
  visited = 0;
  for_each_stopping_time(tree, [&](const stopping_time& tau) {
    ++visited;
    indicator in(tree.leaf_count(), 0);
    bool any = false;
    for (std::size_t leaf = 0; leaf < in.size(); ++leaf) {
      in[leaf] = static_cast<char>(tau.finite_at(leaf));
      any = any || in[leaf];
    }
    if (any) active.insert(std::move(in));
  });
  set_maximum best;
  for (const auto& in : active) best.offer_ascending(ratio(in), in);
  return {std::move(name), best.value, witness_kind::leaf_set, to_leaf_set(best.best), true};
}

inline oracle_comparison compare(condition_constant subsets, condition_constant stops) {
  oracle_comparison out;
  out.condition = subsets.condition;
  out.values_agree = nearly_equal(subsets.value, stops.value, 1e-9, 1e-12);
  out.witnesses_agree = subsets.witness == stops.witness;
  out.by_subsets = std::move(subsets);
  out.by_stopping_times = std::move(stops);
  return out;
}

}  // namespace detail

/// Computes the RH and S-vector constants both ways; fails with CapExceeded above `cap` leaves.
inline oracle_result stopping_time_oracle(const filtration_tree& tree, const weight& v, const weight& omega1,
                                          const weight& omega2, const exponent_config& exps,
                                          std::size_t cap = default_oracle_cap) {
  const auto leaves = tree.leaf_count();
  detail::require(leaves <= cap && leaves < 63, errc::cap_exceeded,
                  std::to_string(leaves) + " leaves exceed the oracle cap of " + std::to_string(cap));
  const auto s1 = dual_weight(omega1, exps.p1());
  const auto s2 = dual_weight(omega2, exps.p2());
  condition_options exact;
  exact.cap = cap;

  oracle_result out;
  out.recursion_count = count_stopping_times(tree);
  out.subsets = (std::uint64_t{1} << leaves) - 1;

  const rh_evaluator rh(tree, s1, s2, exps);
  out.comparisons.push_back(detail::compare(detail::subset_supremum(tree, rh, exact, "RH"),
                                            detail::stopping_time_supremum(tree, rh, "RH", out.stopping_times)));
  const spvec_evaluator sv(tree, v, s1, s2, exps);
  std::uint64_t again = 0;
  out.comparisons.push_back(detail::compare(detail::subset_supremum(tree, sv, exact, "Spvec"),
                                            detail::stopping_time_supremum(tree, sv, "Spvec", again)));
  return out;
}

}  // namespace marweight

#endif
