#ifndef MARWEIGHT_CONDITIONS_HPP
#define MARWEIGHT_CONDITIONS_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "marweight/error.hpp"
#include "marweight/filtration_tree.hpp"
#include "marweight/norms.hpp"
#include "marweight/random.hpp"
#include "marweight/simple_function.hpp"

namespace marweight {

enum class search_mode { exact, sampled };

inline constexpr std::size_t default_subset_cap = 20;

struct condition_options {
  search_mode mode = search_mode::exact;
  /// Largest leaf count for which exact subset enumeration is allowed.
  std::size_t cap = default_subset_cap;
  /// Number of candidate sets drawn in sampled mode.
  std::size_t budget = 4096;
  std::uint64_t seed = 0;
};

enum class witness_kind { leaf_set, atom };

/// A weight-condition constant together with the set or atom attaining it.
struct condition_constant {
  std::string condition;
  double value = 0;
  witness_kind kind = witness_kind::leaf_set;
  /// Sorted leaf list for set suprema, or {level, atom} for level suprema.
  std::vector<std::size_t> witness;
  /// False when the supremum was taken over a sample (then `value` is a lower bound).
  bool exact = true;
};

/// Indicator of a leaf subset; bytes rather than bits so evaluators can index it cheaply.
using indicator = std::vector<char>;

inline indicator to_indicator(std::size_t leaves, const leaf_set& set) {
  indicator in(leaves, 0);
  for (auto leaf : set) {
    detail::require(leaf < leaves, errc::index_out_of_range, "leaf index " + std::to_string(leaf));
    in[leaf] = 1;
  }
  return in;
}

inline leaf_set to_leaf_set(const indicator& in) {
  leaf_set out;
  for (std::size_t i = 0; i < in.size(); ++i)
    if (in[i]) out.push_back(i);
  return out;
}

/// Canonical order on subsets: compare as binary numbers with leaf i as bit i.
inline bool set_less(const indicator& a, const indicator& b) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

/// Ratio (int_B s1)^(p/p1) (int_B s2)^(p/p2) / int_B s1^(p/p1) s2^(p/p2) for the dual weights.
class rh_evaluator {
 public:
  rh_evaluator(const filtration_tree& tree, const weight& sigma1, const weight& sigma2, const exponent_config& exps)
      : a_(exps.share1()), b_(exps.share2()) {
    tree.require_leaf_count(sigma1.size(), "sigma1");
    tree.require_leaf_count(sigma2.size(), "sigma2");
    const auto leaves = tree.leaf_count();
    s1_.resize(leaves);
    s2_.resize(leaves);
    mix_.resize(leaves);
    for (std::size_t i = 0; i < leaves; ++i) {
      s1_[i] = sigma1[i] * tree.mass(i);
      s2_[i] = sigma2[i] * tree.mass(i);
      mix_[i] = std::pow(sigma1[i], a_) * std::pow(sigma2[i], b_) * tree.mass(i);
    }
  }

  double operator()(const indicator& in) const {
    double i1 = 0, i2 = 0, mix = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (!in[i]) continue;
      i1 += s1_[i];
      i2 += s2_[i];
      mix += mix_[i];
    }
    return std::pow(i1, a_) * std::pow(i2, b_) / mix;
  }

 private:
  double a_, b_;
  std::vector<double> s1_, s2_, mix_;
};

/// Ratio of the bilinear testing condition on B:
/// (int_B M(s1 chi_B, s2 chi_B)^p v dmu)^(1/p) / (|B|_s1^(1/p1) |B|_s2^(1/p2)).
class spvec_evaluator {
 public:
  spvec_evaluator(const filtration_tree& tree, const weight& v, const weight& sigma1, const weight& sigma2,
                  const exponent_config& exps)
      : tree_(&tree), p_(exps.p()), inv_p1_(1.0 / exps.p1()), inv_p2_(1.0 / exps.p2()) {
    tree.require_leaf_count(v.size(), "v");
    tree.require_leaf_count(sigma1.size(), "sigma1");
    tree.require_leaf_count(sigma2.size(), "sigma2");
    const auto leaves = tree.leaf_count();
    s1_.resize(leaves);
    s2_.resize(leaves);
    vm_.resize(leaves);
    for (std::size_t i = 0; i < leaves; ++i) {
      s1_[i] = sigma1[i] * tree.mass(i);
      s2_[i] = sigma2[i] * tree.mass(i);
      vm_[i] = v[i] * tree.mass(i);
    }
    products_.resize(tree.level_count());
    for (std::size_t n = 0; n < tree.level_count(); ++n) products_[n].resize(tree.atom_count(n));
  }

  double operator()(const indicator& in) const {
    const auto& tree = *tree_;
    for (std::size_t n = 0; n < tree.level_count(); ++n) {
      for (std::size_t a = 0; a < tree.atom_count(n); ++a) {
        double i1 = 0, i2 = 0;
        for (auto leaf : tree.atom_leaves(n, a)) {
          if (!in[leaf]) continue;
          i1 += s1_[leaf];
          i2 += s2_[leaf];
        }
        const double m = tree.atom_mass(n, a);
        products_[n][a] = (i1 / m) * (i2 / m);
      }
    }
    double lhs = 0, b1 = 0, b2 = 0;
    for (std::size_t leaf = 0; leaf < in.size(); ++leaf) {
      if (!in[leaf]) continue;
      double top = 0;
      for (std::size_t n = 0; n < tree.level_count(); ++n) top = std::max(top, products_[n][tree.atom_of(n, leaf)]);
      lhs += std::pow(top, p_) * vm_[leaf];
      b1 += s1_[leaf];
      b2 += s2_[leaf];
    }
    return std::pow(lhs, 1.0 / p_) / (std::pow(b1, inv_p1_) * std::pow(b2, inv_p2_));
  }

 private:
  const filtration_tree* tree_;
  double p_, inv_p1_, inv_p2_;
  std::vector<double> s1_, s2_, vm_;
  mutable std::vector<std::vector<double>> products_;
};

/// Ratio of the linear testing condition on B: (int_B M(s chi_B)^p v dmu)^(1/p) / |B|_s^(1/p).
class sp_evaluator {
 public:
  sp_evaluator(const filtration_tree& tree, const weight& v, const weight& sigma, double p) : tree_(&tree), p_(p) {
    tree.require_leaf_count(v.size(), "v");
    tree.require_leaf_count(sigma.size(), "sigma");
    s_.resize(tree.leaf_count());
    vm_.resize(tree.leaf_count());
    for (std::size_t i = 0; i < s_.size(); ++i) {
      s_[i] = sigma[i] * tree.mass(i);
      vm_[i] = v[i] * tree.mass(i);
    }
    averages_.resize(tree.level_count());
    for (std::size_t n = 0; n < tree.level_count(); ++n) averages_[n].resize(tree.atom_count(n));
  }

  double operator()(const indicator& in) const {
    const auto& tree = *tree_;
    for (std::size_t n = 0; n < tree.level_count(); ++n) {
      for (std::size_t a = 0; a < tree.atom_count(n); ++a) {
        double sum = 0;
        for (auto leaf : tree.atom_leaves(n, a))
          if (in[leaf]) sum += s_[leaf];
        averages_[n][a] = sum / tree.atom_mass(n, a);
      }
    }
    double lhs = 0, mass = 0;
    for (std::size_t leaf = 0; leaf < in.size(); ++leaf) {
      if (!in[leaf]) continue;
      double top = 0;
      for (std::size_t n = 0; n < tree.level_count(); ++n) top = std::max(top, averages_[n][tree.atom_of(n, leaf)]);
      lhs += std::pow(top, p_) * vm_[leaf];
      mass += s_[leaf];
    }
    return std::pow(lhs / mass, 1.0 / p_);
  }

 private:
  const filtration_tree* tree_;
  double p_;
  std::vector<double> s_, vm_;
  mutable std::vector<std::vector<double>> averages_;
};

namespace detail {

/// Relative gap below which two set ratios count as tied; the smaller set (in set_less order) wins.
inline constexpr double tie_tolerance = 1e-12;

struct set_maximum {
  double value = -1;
  indicator best;

  bool beats(double candidate) const { return value < 0 || candidate > value + tie_tolerance * value; }

  /// For candidates arriving in ascending set_less order.
  void offer_ascending(double candidate, const indicator& in) {
    if (beats(candidate)) {
      value = candidate;
      best = in;
    }
  }

  void offer(double candidate, const indicator& in) {
    if (beats(candidate) || (candidate >= value - tie_tolerance * value && set_less(in, best))) {
      value = std::max(value, candidate);
      best = in;
    }
  }
};

/// Candidate sets for sampled mode: every atom, unions of atoms of one level while the union
/// budget lasts, then seeded uniform random subsets.
inline std::vector<indicator> sampled_sets(const filtration_tree& tree, const condition_options& options) {
  const auto leaves = tree.leaf_count();
  std::vector<indicator> sets;
  sets.push_back(indicator(leaves, 1));
  for (std::size_t n = 0; n < tree.level_count(); ++n) {
    for (std::size_t a = 0; a < tree.atom_count(n); ++a) sets.push_back(to_indicator(leaves, tree.atom_leaves(n, a)));
  }
  std::size_t union_budget = options.budget / 2;
  for (std::size_t n = 0; n < tree.level_count(); ++n) {
    const auto m = tree.atom_count(n);
    if (m >= 63 || (std::uint64_t{1} << m) - 1 > union_budget) continue;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      if (std::popcount(mask) < 2) continue;
      indicator in(leaves, 0);
      for (std::size_t a = 0; a < m; ++a)
        if (mask >> a & 1U)
          for (auto leaf : tree.atom_leaves(n, a)) in[leaf] = 1;
      sets.push_back(std::move(in));
    }
    union_budget -= (std::uint64_t{1} << m) - 1;
  }
  auto rng = make_rng(options.seed, 0x5e75);
  const std::size_t target = std::max(sets.size(), options.budget);
  while (sets.size() < target) {
    indicator in(leaves, 0);
    bool any = false;
    for (std::size_t i = 0; i < leaves; ++i) {
      in[i] = static_cast<char>(rng() >> 63);
      any = any || in[i];
    }
    if (any) sets.push_back(std::move(in));
  }
  return sets;
}

/// Supremum of `ratio` over nonempty subsets, exhaustively or over a sample.
template <class Ratio>
condition_constant subset_supremum(const filtration_tree& tree, const Ratio& ratio, const condition_options& options,
                                   std::string name) {
  const auto leaves = tree.leaf_count();
  set_maximum best;
  bool exact = options.mode == search_mode::exact;
  if (exact) {
    if (leaves > options.cap || leaves >= 63) {
      fail(errc::cap_exceeded, std::to_string(leaves) + " leaves exceed the exact-mode cap of " + std::to_string(options.cap));
    }
    indicator in(leaves, 0);
    const std::uint64_t end = std::uint64_t{1} << leaves;
    for (std::uint64_t mask = 1; mask < end; ++mask) {
      for (std::size_t i = 0; i < leaves; ++i) in[i] = static_cast<char>(mask >> i & 1U);
      // Ascending masks are ascending in set_less, so near-ties keep the smallest set.
      best.offer_ascending(ratio(in), in);
    }
  } else {
    for (const auto& in : sampled_sets(tree, options)) best.offer(ratio(in), in);
  }
  return {std::move(name), best.value, witness_kind::leaf_set, to_leaf_set(best.best), exact};
}

}  // namespace detail

/// RH(p1, p2) constant: sup over nonempty B of the reverse Hoelder ratio of the dual weights.
/// Always at least one.
inline condition_constant rh_constant(const filtration_tree& tree, const weight& omega1, const weight& omega2,
                                      const exponent_config& exps, const condition_options& options = {}) {
  const rh_evaluator ratio(tree, dual_weight(omega1, exps.p1()), dual_weight(omega2, exps.p2()), exps);
  return detail::subset_supremum(tree, ratio, options, "RH");
}

inline double rh_ratio(const filtration_tree& tree, const weight& omega1, const weight& omega2,
                       const exponent_config& exps, const leaf_set& set) {
  const rh_evaluator ratio(tree, dual_weight(omega1, exps.p1()), dual_weight(omega2, exps.p2()), exps);
  return ratio(to_indicator(tree.leaf_count(), set));
}

/// A_p-vector constant: max over levels and atoms of E_n(v)^(1/p) E_n(s1)^(1/p1') E_n(s2)^(1/p2').
inline condition_constant a_vec_p_constant(const filtration_tree& tree, const weight& v, const weight& omega1,
                                           const weight& omega2, const exponent_config& exps) {
  const auto s1 = dual_weight(omega1, exps.p1());
  const auto s2 = dual_weight(omega2, exps.p2());
  tree.require_leaf_count(v.size(), "v");
  const double e1 = 1.0 / exps.p1_conj();
  const double e2 = 1.0 / exps.p2_conj();
  condition_constant out{"Apvec", -1, witness_kind::atom, {}, true};
  for (std::size_t n = 0; n <= tree.depth(); ++n) {
    const auto ev = atom_averages(tree, v.function(), n);
    const auto e_s1 = atom_averages(tree, s1.function(), n);
    const auto e_s2 = atom_averages(tree, s2.function(), n);
    for (std::size_t a = 0; a < ev.size(); ++a) {
      const double value = std::pow(ev[a], exps.inv_p()) * std::pow(e_s1[a], e1) * std::pow(e_s2[a], e2);
      if (value > out.value) {
        out.value = value;
        out.witness = {n, a};
      }
    }
  }
  return out;
}

/// Couple A_p constant: max over levels and atoms of E_n(v) E_n(omega^(-1/(p-1)))^(p-1).
/// With v = omega this is the one-weight constant, which is at least one.
inline condition_constant a_p_constant(const filtration_tree& tree, const weight& v, const weight& omega, double p) {
  detail::require(p > 1 && std::isfinite(p), errc::exponent_out_of_range, "A_p needs p > 1");
  const auto sigma = dual_weight(omega, p);
  tree.require_leaf_count(v.size(), "v");
  condition_constant out{"Ap", -1, witness_kind::atom, {}, true};
  for (std::size_t n = 0; n <= tree.depth(); ++n) {
    const auto ev = atom_averages(tree, v.function(), n);
    const auto es = atom_averages(tree, sigma.function(), n);
    for (std::size_t a = 0; a < ev.size(); ++a) {
      const double value = ev[a] * std::pow(es[a], p - 1.0);
      if (value > out.value) {
        out.value = value;
        out.witness = {n, a};
      }
    }
  }
  return out;
}

/// S_p-vector (bilinear testing) constant.
inline condition_constant s_vec_p_constant(const filtration_tree& tree, const weight& v, const weight& omega1,
                                           const weight& omega2, const exponent_config& exps,
                                           const condition_options& options = {}) {
  const spvec_evaluator ratio(tree, v, dual_weight(omega1, exps.p1()), dual_weight(omega2, exps.p2()), exps);
  return detail::subset_supremum(tree, ratio, options, "Spvec");
}

inline double spvec_ratio(const filtration_tree& tree, const weight& v, const weight& omega1, const weight& omega2,
                          const exponent_config& exps, const leaf_set& set) {
  const spvec_evaluator ratio(tree, v, dual_weight(omega1, exps.p1()), dual_weight(omega2, exps.p2()), exps);
  return ratio(to_indicator(tree.leaf_count(), set));
}

/// Linear testing constant S_p for the couple (v, omega).
inline condition_constant s_p_constant(const filtration_tree& tree, const weight& v, const weight& omega, double p,
                                       const condition_options& options = {}) {
  detail::require(p > 1 && std::isfinite(p), errc::exponent_out_of_range, "S_p needs p > 1");
  const sp_evaluator ratio(tree, v, dual_weight(omega, p), p);
  return detail::subset_supremum(tree, ratio, options, "Sp");
}

inline double sp_ratio(const filtration_tree& tree, const weight& v, const weight& omega, double p, const leaf_set& set) {
  const sp_evaluator ratio(tree, v, dual_weight(omega, p), p);
  return ratio(to_indicator(tree.leaf_count(), set));
}

}  // namespace marweight

#endif
