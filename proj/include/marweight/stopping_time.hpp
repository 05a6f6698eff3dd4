#ifndef MARWEIGHT_STOPPING_TIME_HPP
#define MARWEIGHT_STOPPING_TIME_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "marweight/error.hpp"
#include "marweight/filtration_tree.hpp"
#include "marweight/random.hpp"
#include "marweight/simple_function.hpp"

namespace marweight {

/// A level in {0, ..., N} or `never` (infinity) for each leaf.
class stopping_time {
 public:
  static constexpr int never = -1;

  stopping_time() = default;
  explicit stopping_time(std::vector<int> values) : values_(std::move(values)) {}
  stopping_time(std::initializer_list<int> values) : values_(values) {}

  static stopping_time constant(std::size_t leaves, int level) { return stopping_time(std::vector<int>(leaves, level)); }

  std::size_t size() const noexcept { return values_.size(); }
  int operator[](std::size_t leaf) const { return values_[leaf]; }
  const std::vector<int>& values() const noexcept { return values_; }
  bool finite_at(std::size_t leaf) const { return values_[leaf] != never; }

  /// {tau < infinity} as a sorted leaf list.
  leaf_set active_set() const {
    leaf_set out;
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] != never) out.push_back(i);
    return out;
  }

  std::vector<bool> active_mask() const {
    std::vector<bool> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = values_[i] != never;
    return out;
  }

  friend bool operator==(const stopping_time&, const stopping_time&) = default;
  friend auto operator<=>(const stopping_time&, const stopping_time&) = default;

 private:
  std::vector<int> values_;
};

struct stopping_violation {
  std::size_t level;
  std::size_t atom;
  std::string message;
};

struct stopping_check {
  bool valid = true;
  std::vector<stopping_violation> violations;
};

/// Measurability check: for every n, {tau <= n} must be a union of atoms of P_n.
template <class T>
stopping_check is_stopping_time(const basic_filtration_tree<T>& tree, const std::vector<int>& assignment) {
  stopping_check check;
  if (assignment.size() != tree.leaf_count()) {
    check.valid = false;
    check.violations.push_back({0, 0, "assignment has " + std::to_string(assignment.size()) + " entries"});
    return check;
  }
  const int depth = static_cast<int>(tree.depth());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != stopping_time::never && (assignment[i] < 0 || assignment[i] > depth)) {
      check.valid = false;
      check.violations.push_back({tree.depth(), tree.atom_of(tree.depth(), i),
                                  "value " + std::to_string(assignment[i]) + " at leaf " + std::to_string(i) +
                                      " outside {0..N} u {inf}"});
    }
  }
  if (!check.valid) return check;
  for (std::size_t n = 0; n <= tree.depth(); ++n) {
    for (std::size_t a = 0; a < tree.atom_count(n); ++a) {
      std::size_t stopped = 0;
      for (auto leaf : tree.atom_leaves(n, a)) {
        const int t = assignment[leaf];
        if (t != stopping_time::never && t <= static_cast<int>(n)) ++stopped;
      }
      if (stopped != 0 && stopped != tree.atom_leaves(n, a).size()) {
        check.valid = false;
        check.violations.push_back({n, a, "{tau <= " + std::to_string(n) + "} splits this atom"});
      }
    }
  }
  return check;
}

template <class T>
stopping_check is_stopping_time(const basic_filtration_tree<T>& tree, const stopping_time& tau) {
  return is_stopping_time(tree, tau.values());
}

template <class T>
void require_stopping_time(const basic_filtration_tree<T>& tree, const stopping_time& tau) {
  const auto check = is_stopping_time(tree, tau);
  if (!check.valid) detail::fail(errc::invalid_stopping_time, check.violations.front().message);
}

/// First level at which `conditions[n]` holds; conditions[n] must be constant on the atoms of P_n.
template <class T>
stopping_time hitting_time(const basic_filtration_tree<T>& tree, const std::vector<std::vector<bool>>& conditions) {
  detail::require(conditions.size() == tree.level_count(), errc::bad_length,
                  "need one condition per level, got " + std::to_string(conditions.size()));
  for (std::size_t n = 0; n < conditions.size(); ++n) {
    tree.require_leaf_count(conditions[n].size(), "condition");
    for (std::size_t a = 0; a < tree.atom_count(n); ++a) {
      const auto& leaves = tree.atom_leaves(n, a);
      const bool first = conditions[n][leaves.front()];
      for (auto leaf : leaves) {
        if (conditions[n][leaf] != first) {
          detail::fail(errc::not_adapted,
                       "condition at level " + std::to_string(n) + " is not constant on atom " + std::to_string(a));
        }
      }
    }
  }
  std::vector<int> out(tree.leaf_count(), stopping_time::never);
  for (std::size_t leaf = 0; leaf < out.size(); ++leaf) {
    for (std::size_t n = 0; n < conditions.size(); ++n) {
      if (conditions[n][leaf]) {
        out[leaf] = static_cast<int>(n);
        break;
      }
    }
  }
  return stopping_time(std::move(out));
}

/// inf{n : values[n] > threshold} (or >= when `strict` is false) for adapted level values.
template <class T>
stopping_time hitting_time_above(const basic_filtration_tree<T>& tree,
                                 const std::vector<basic_simple_function<T>>& values, const T& threshold,
                                 bool strict = true) {
  std::vector<std::vector<bool>> conditions(values.size());
  for (std::size_t n = 0; n < values.size(); ++n) {
    conditions[n].resize(values[n].size());
    for (std::size_t i = 0; i < values[n].size(); ++i) {
      conditions[n][i] = strict ? values[n][i] > threshold : values[n][i] >= threshold;
    }
  }
  return hitting_time(tree, conditions);
}

/// A function defined only on {tau < infinity}; `values` is zero off that set.
template <class T>
struct partial_function {
  basic_simple_function<T> values;
  std::vector<bool> defined;
};

/// f_tau: on leaves with tau = n < infinity, the value of E_n f.
template <class T>
partial_function<T> stopped_value(const basic_filtration_tree<T>& tree,
                                  const std::type_identity_t<basic_simple_function<T>>& f, const stopping_time& tau) {
  tree.require_leaf_count(f.size());
  require_stopping_time(tree, tau);
  std::vector<T> values(tree.leaf_count(), T(0));
  std::vector<bool> defined(tree.leaf_count(), false);
  std::vector<std::vector<T>> cache(tree.level_count());
  for (std::size_t leaf = 0; leaf < values.size(); ++leaf) {
    if (!tau.finite_at(leaf)) continue;
    const auto n = static_cast<std::size_t>(tau[leaf]);
    if (cache[n].empty()) cache[n] = atom_averages(tree, f, n);
    values[leaf] = cache[n][tree.atom_of(n, leaf)];
    defined[leaf] = true;
  }
  return {basic_simple_function<T>(std::move(values)), std::move(defined)};
}

/// E(f | F_tau) on {tau < infinity}; on a finite tree this coincides with f_tau.
template <class T>
partial_function<T> stopped_conditional_expectation(const basic_filtration_tree<T>& tree,
                                                    const std::type_identity_t<basic_simple_function<T>>& f,
                                                    const stopping_time& tau) {
  return stopped_value(tree, f, tau);
}

/// tau = N on `set`, infinity elsewhere; {tau < infinity} = set.
template <class T>
stopping_time from_set(const basic_filtration_tree<T>& tree, const leaf_set& set) {
  std::vector<int> out(tree.leaf_count(), stopping_time::never);
  for (auto leaf : set) {
    detail::require(leaf < tree.leaf_count(), errc::index_out_of_range, "leaf index " + std::to_string(leaf));
    out[leaf] = static_cast<int>(tree.depth());
  }
  return stopping_time(std::move(out));
}

/// The tree nodes (level, atom) on which tau stops; an antichain for a valid stopping time.
template <class T>
std::vector<atom_ref> antichain(const basic_filtration_tree<T>& tree, const stopping_time& tau) {
  require_stopping_time(tree, tau);
  std::vector<atom_ref> out;
  for (std::size_t leaf = 0; leaf < tau.size(); ++leaf) {
    if (!tau.finite_at(leaf)) continue;
    const auto n = static_cast<std::size_t>(tau[leaf]);
    const atom_ref node{n, tree.atom_of(n, leaf)};
    if (std::find(out.begin(), out.end(), node) == out.end()) out.push_back(node);
  }
  std::sort(out.begin(), out.end(),
            [](const atom_ref& a, const atom_ref& b) { return std::pair(a.level, a.index) < std::pair(b.level, b.index); });
  return out;
}

inline constexpr std::uint64_t default_stopping_time_cap = 1'000'000;

/// Number of stopping times: S(node) = 1 + prod S(child), S = 2 at the finest level, multiplied
/// over the atoms of P_0. Saturates at UINT64_MAX.
template <class T>
std::uint64_t count_stopping_times(const basic_filtration_tree<T>& tree) {
  constexpr auto top = std::numeric_limits<std::uint64_t>::max();
  auto mul = [](std::uint64_t a, std::uint64_t b) { return (b != 0 && a > top / b) ? top : a * b; };
  std::vector<std::uint64_t> below(tree.atom_count(tree.depth()), 2);
  for (std::size_t n = tree.depth(); n-- > 0;) {
    std::vector<std::uint64_t> here(tree.atom_count(n));
    for (std::size_t a = 0; a < here.size(); ++a) {
      std::uint64_t prod = 1;
      for (auto c : tree.children(n, a)) prod = mul(prod, below[c]);
      here[a] = prod == top ? top : prod + 1;
    }
    below = std::move(here);
  }
  std::uint64_t total = 1;
  for (auto s : below) total = mul(total, s);
  return total;
}

/// Calls `visit` once for every stopping time of the tree, in a fixed depth-first order.
template <class T, class Visitor>
void for_each_stopping_time(const basic_filtration_tree<T>& tree, Visitor&& visit,
                            std::uint64_t cap = default_stopping_time_cap) {
  const auto count = count_stopping_times(tree);
  if (count > cap) {
    detail::fail(errc::too_many_stopping_times,
                 std::to_string(count) + " stopping times exceed the cap of " + std::to_string(cap));
  }
  std::vector<int> tau(tree.leaf_count(), stopping_time::never);
  std::vector<atom_ref> pending;
  for (std::size_t a = tree.atom_count(0); a-- > 0;) pending.push_back({0, a});

  std::function<void(std::vector<atom_ref>&)> recurse = [&](std::vector<atom_ref>& stack) {
    if (stack.empty()) {
      visit(stopping_time(tau));
      return;
    }
    const atom_ref node = stack.back();
    stack.pop_back();
    const auto& leaves = tree.atom_leaves(node.level, node.index);

    for (auto leaf : leaves) tau[leaf] = static_cast<int>(node.level);
    recurse(stack);
    for (auto leaf : leaves) tau[leaf] = stopping_time::never;

    if (node.level < tree.depth()) {
      const auto& kids = tree.children(node.level, node.index);
      const auto mark = stack.size();
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({node.level + 1, *it});
      recurse(stack);
      stack.resize(mark);
    } else {
      recurse(stack);
    }
    stack.push_back(node);
  };
  recurse(pending);
}

template <class T>
std::vector<stopping_time> enumerate_stopping_times(const basic_filtration_tree<T>& tree,
                                                    std::uint64_t cap = default_stopping_time_cap) {
  std::vector<stopping_time> out;
  for_each_stopping_time(tree, [&](stopping_time tau) { out.push_back(std::move(tau)); }, cap);
  return out;
}

/// Result of maximising sum_n int_{tau = n} payoff_n dmu over all stopping times.
struct optimal_stop {
  double value = 0;
  stopping_time tau;
};

/// Backward induction on the tree. payoffs[n] is a nonnegative leaf function; stopping on atom A of
/// level n earns the mu-integral of payoffs[n] over A.
inline optimal_stop optimal_stopping(const filtration_tree& tree, const std::vector<simple_function>& payoffs) {
  detail::require(payoffs.size() == tree.level_count(), errc::bad_length, "need one payoff per level");
  const std::size_t depth = tree.depth();
  // best[n][a]: optimal value within atom a of level n; stop[n][a]: whether to stop there.
  std::vector<std::vector<double>> best(tree.level_count());
  std::vector<std::vector<char>> stop(tree.level_count());
  for (std::size_t n = depth + 1; n-- > 0;) {
    tree.require_leaf_count(payoffs[n].size(), "payoff");
    best[n].assign(tree.atom_count(n), 0.0);
    stop[n].assign(tree.atom_count(n), 0);
    for (std::size_t a = 0; a < tree.atom_count(n); ++a) {
      double here = 0;
      for (auto leaf : tree.atom_leaves(n, a)) here += payoffs[n][leaf] * tree.mass(leaf);
      double later = 0;
      if (n < depth) {
        for (auto c : tree.children(n, a)) later += best[n + 1][c];
      }
      if (here > 0 && here >= later) {
        best[n][a] = here;
        stop[n][a] = 1;
      } else {
        best[n][a] = later;
      }
    }
  }
  std::vector<int> tau(tree.leaf_count(), stopping_time::never);
  double value = 0;
  std::vector<atom_ref> stack;
  for (std::size_t a = 0; a < tree.atom_count(0); ++a) {
    value += best[0][a];
    stack.push_back({0, a});
  }
  while (!stack.empty()) {
    const auto node = stack.back();
    stack.pop_back();
    if (stop[node.level][node.index]) {
      for (auto leaf : tree.atom_leaves(node.level, node.index)) tau[leaf] = static_cast<int>(node.level);
    } else if (node.level < depth) {
      for (auto c : tree.children(node.level, node.index)) stack.push_back({node.level + 1, c});
    }
  }
  return {value, stopping_time(std::move(tau))};
}

/// Random stopping time: stop at each visited node with probability `stop_probability`; at the
/// finest level the alternative is never stopping.
template <class T>
stopping_time random_stopping_time(const basic_filtration_tree<T>& tree, rng_engine& rng, double stop_probability = 0.35) {
  std::vector<int> tau(tree.leaf_count(), stopping_time::never);
  std::vector<atom_ref> stack;
  for (std::size_t a = 0; a < tree.atom_count(0); ++a) stack.push_back({0, a});
  while (!stack.empty()) {
    const auto node = stack.back();
    stack.pop_back();
    const bool finest = node.level == tree.depth();
    if (bernoulli(rng, finest ? 0.5 : stop_probability)) {
      for (auto leaf : tree.atom_leaves(node.level, node.index)) tau[leaf] = static_cast<int>(node.level);
    } else if (!finest) {
      for (auto c : tree.children(node.level, node.index)) stack.push_back({node.level + 1, c});
    }
  }
  return stopping_time(std::move(tau));
}

}  // namespace marweight

#endif
