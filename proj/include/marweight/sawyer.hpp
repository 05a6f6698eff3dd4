// Stopping-time decomposition behind the strong-type testing bound.
#ifndef MARWEIGHT_SAWYER_HPP
#define MARWEIGHT_SAWYER_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "marweight/error.hpp"
#include "marweight/filtration_tree.hpp"
#include "marweight/maximal.hpp"
#include "marweight/norms.hpp"
#include "marweight/report.hpp"
#include "marweight/simple_function.hpp"
#include "marweight/stopping_time.hpp"

namespace marweight {

/// The unique k with 2^k < x <= 2^(k+1), for x > 0. Exact: frexp gives x = m 2^e with m in [1/2, 1).
inline int dyadic_shell(double x) {
  int e = 0;
  const double m = std::frexp(x, &e);
  return m == 0.5 ? e - 2 : e - 1;
}

struct sawyer_cell {
  int k = 0;
  int j = 0;
  /// {tau_k < inf} cut down to the j-th shell of E(s1 | F_tau_k) E(s2 | F_tau_k).
  leaf_set a_set;
  /// a_set intersected with {tau_(k+1) = inf}.
  leaf_set b_set;
  double theta = 0;
  /// min over a_set of |E^s1(f | F_tau_k) E^s2(g | F_tau_k)|^p.
  double t = std::numeric_limits<double>::infinity();
};

struct sawyer_decomposition {
  int k_min = 0;
  int k_max = -1;
  /// taus[k - k_min] for k in [k_min, k_max + 1]; the last one is identically infinite.
  std::vector<stopping_time> taus;
  /// Cells with nonempty a_set, ordered by (k, j).
  std::vector<sawyer_cell> cells;
  /// M(f s1, g s2).
  simple_function maximal;
  /// Per-level stopped quantities, indexed [level][atom].
  std::vector<std::vector<double>> e_s1, e_s2, ew_f, ew_g, e_fs1, e_gs2;
  proof_chain_report checks;

  const stopping_time& tau(int k) const {
    detail::require(k >= k_min && k <= k_max + 1, errc::index_out_of_range, "no stopping time for k = " + std::to_string(k));
    return taus[static_cast<std::size_t>(k - k_min)];
  }
};

namespace detail {

inline leaf_set set_of(const std::vector<char>& mask) {
  leaf_set out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(i);
  return out;
}

}  // namespace detail

/// Builds tau_k, A_(k,j), B_(k,j), theta and T for the pair (f s1, g s2) and checks every set identity
/// and the per-cell lower estimate 2^(kp) <= 2^p T theta / |B|_v.
inline sawyer_decomposition sawyer_decomposition_of(const filtration_tree& tree, const simple_function& f,
                                                    const simple_function& g, const weight& sigma1,
                                                    const weight& sigma2, const exponent_config& exps,
                                                    const weight& v) {
  const auto leaves = tree.leaf_count();
  tree.require_leaf_count(f.size(), "f");
  tree.require_leaf_count(g.size(), "g");
  tree.require_leaf_count(sigma1.size(), "sigma1");
  tree.require_leaf_count(sigma2.size(), "sigma2");
  tree.require_leaf_count(v.size(), "v");
  const double p = exps.p();

  sawyer_decomposition out;
  const auto fs1 = pointwise_product(f, sigma1.function());
  const auto gs2 = pointwise_product(g, sigma2.function());
  const auto h = level_products(tree, fs1, gs2);
  out.maximal = pointwise_max(h);

  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (auto x : out.maximal) {
    if (x > 0) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  detail::require(hi > 0, errc::degenerate_input, "M(f s1, g s2) vanishes identically");
  out.k_min = dyadic_shell(lo) - 1;
  out.k_max = dyadic_shell(hi);

  for (int k = out.k_min; k <= out.k_max + 1; ++k) out.taus.push_back(hitting_time_above(tree, h, std::ldexp(1.0, k)));

  for (std::size_t n = 0; n < tree.level_count(); ++n) {
    out.e_s1.push_back(atom_averages(tree, sigma1.function(), n));
    out.e_s2.push_back(atom_averages(tree, sigma2.function(), n));
    out.ew_f.push_back(weighted_atom_averages(tree, f, sigma1, n));
    out.ew_g.push_back(weighted_atom_averages(tree, g, sigma2, n));
    out.e_fs1.push_back(atom_averages(tree, fs1, n));
    out.e_gs2.push_back(atom_averages(tree, gs2, n));
  }

  // Cells, keyed by (k, j) so they come out ordered.
  std::map<std::pair<int, int>, std::pair<std::vector<char>, std::vector<char>>> masks;
  std::map<std::pair<int, int>, sawyer_cell> cells;
  std::size_t factorization_failures = 0;
  for (int k = out.k_min; k <= out.k_max; ++k) {
    const auto& tk = out.tau(k);
    const auto& next = out.tau(k + 1);
    for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
      if (!tk.finite_at(leaf)) continue;
      const auto n = static_cast<std::size_t>(tk[leaf]);
      const auto a = tree.atom_of(n, leaf);
      const double r = out.e_s1[n][a] * out.e_s2[n][a];
      const int j = dyadic_shell(r);
      auto& [amask, bmask] = masks[{k, j}];
      if (amask.empty()) {
        amask.assign(leaves, 0);
        bmask.assign(leaves, 0);
      }
      auto& cell = cells[{k, j}];
      cell.k = k;
      cell.j = j;
      amask[leaf] = 1;
      cell.t = std::min(cell.t, std::pow(std::fabs(out.ew_f[n][a] * out.ew_g[n][a]), p));
      if (!next.finite_at(leaf)) {
        bmask[leaf] = 1;
        cell.theta += std::pow(r, p) * v[leaf] * tree.mass(leaf);
      }
      // E(f s | F_tau) = E^s(f | F_tau) E(s | F_tau).
      if (!nearly_equal(out.e_fs1[n][a], out.ew_f[n][a] * out.e_s1[n][a]) ||
          !nearly_equal(out.e_gs2[n][a], out.ew_g[n][a] * out.e_s2[n][a])) {
        ++factorization_failures;
      }
    }
  }
  for (auto& [key, cell] : cells) {
    cell.a_set = detail::set_of(masks[key].first);
    cell.b_set = detail::set_of(masks[key].second);
    out.cells.push_back(std::move(cell));
  }

  auto& rep = out.checks;
  rep.check_exact("factorization", factorization_failures);

  // Every tau_k is a stopping time and tau_k <= tau_(k+1).
  std::size_t bad = 0;
  for (std::size_t i = 0; i < out.taus.size(); ++i) {
    if (!is_stopping_time(tree, out.taus[i]).valid) ++bad;
    if (i + 1 < out.taus.size()) {
      for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
        const int a = out.taus[i][leaf], b = out.taus[i + 1][leaf];
        if (a == stopping_time::never && b != stopping_time::never) ++bad;
        if (a != stopping_time::never && b != stopping_time::never && a > b) ++bad;
      }
    }
  }
  rep.check_exact("tau_monotone", bad);

  // {2^k < M <= 2^(k+1)} = {tau_k < inf, tau_(k+1) = inf} = union_j B_(k,j).
  std::size_t shell_bad = 0;
  std::vector<int> owner(leaves, 0);
  std::size_t overlap = 0, subset_bad = 0, measurable_bad = 0;
  for (int k = out.k_min; k <= out.k_max; ++k) {
    std::vector<char> union_b(leaves, 0);
    for (const auto& cell : out.cells) {
      if (cell.k != k) continue;
      for (auto leaf : cell.b_set) union_b[leaf] = 1;
    }
    for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
      const double m = out.maximal[leaf];
      const bool in_shell = m > 0 && dyadic_shell(m) == k;
      const bool by_tau = out.tau(k).finite_at(leaf) && !out.tau(k + 1).finite_at(leaf);
      if (in_shell != by_tau || in_shell != static_cast<bool>(union_b[leaf])) ++shell_bad;
    }
  }
  for (const auto& cell : out.cells) {
    std::vector<char> in_a(leaves, 0);
    for (auto leaf : cell.a_set) in_a[leaf] = 1;
    for (auto leaf : cell.b_set) {
      if (owner[leaf]++) ++overlap;
      if (!in_a[leaf]) ++subset_bad;
    }
    // A_(k,j) is a union of atoms {tau_k = n} cap P_n-atom.
    const auto& tk = out.tau(cell.k);
    for (auto leaf : cell.a_set) {
      const auto n = static_cast<std::size_t>(tk[leaf]);
      for (auto other : tree.atom_leaves(n, tree.atom_of(n, leaf))) {
        if (tk[other] != tk[leaf] || !in_a[other]) ++measurable_bad;
      }
    }
  }
  rep.check_exact("shell_identity", shell_bad);
  rep.check_exact("b_disjoint", overlap);
  rep.check_exact("b_subset_a", subset_bad);
  rep.check_exact("a_measurable", measurable_bad);

  // The B's tile {M > 0}.
  std::size_t tiling_bad = 0;
  double covered = 0, positive = 0;
  for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
    if ((out.maximal[leaf] > 0) != (owner[leaf] == 1)) ++tiling_bad;
    if (out.maximal[leaf] > 0) positive += tree.mass(leaf);
    if (owner[leaf]) covered += tree.mass(leaf);
  }
  rep.check_exact("b_partition", tiling_bad);
  rep.check("b_partition_mass", std::fabs(covered - positive), positive, 1e-9);

  const double two_p = std::pow(2.0, p);
  for (const auto& cell : out.cells) {
    const double bv = weighted_measure(tree, cell.b_set, v);
    if (bv <= 0) continue;
    rep.check("key_estimate", std::pow(2.0, cell.k * p), cell.t * cell.theta / bv, two_p);
  }
  return out;
}

}  // namespace marweight

#endif
