#ifndef MARWEIGHT_NORMS_HPP
#define MARWEIGHT_NORMS_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "marweight/error.hpp"
#include "marweight/filtration_tree.hpp"
#include "marweight/simple_function.hpp"

namespace marweight {

/// sigma = omega^(-1/(p_i - 1)).
inline weight dual_weight(const weight& omega, double p_i) {
  detail::require(p_i > 1 && std::isfinite(p_i), errc::exponent_out_of_range, "dual weight needs p_i > 1");
  const double e = -1.0 / (p_i - 1.0);
  std::vector<double> out(omega.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = omega[i] == 1.0 ? 1.0 : std::pow(omega[i], e);
  return weight(std::move(out));
}

/// (sum |f|^p w mu)^(1/p). Any p > 0 is accepted; for p < 1 this is only a quasi-norm.
inline double lp_norm(const filtration_tree& tree, const simple_function& f, double p, const weight& w) {
  tree.require_leaf_count(f.size());
  tree.require_leaf_count(w.size(), "weight");
  detail::require(p > 0, errc::exponent_out_of_range, "norm exponent must be positive");
  double sum = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != 0) sum += std::pow(std::fabs(f[i]), p) * w[i] * tree.mass(i);
  }
  return std::pow(sum, 1.0 / p);
}

inline double lp_norm(const filtration_tree& tree, const simple_function& f, double p) {
  return lp_norm(tree, f, p, weight::unit(tree.leaf_count()));
}

/// sup over lambda > 0 of lambda * |{|f| > lambda}|_v^(1/p), evaluated exactly: the supremum is
/// approached as lambda rises to one of the finitely many values of |f|.
inline double weak_lp_norm(const filtration_tree& tree, const simple_function& f, double p, const weight& v) {
  tree.require_leaf_count(f.size());
  tree.require_leaf_count(v.size(), "weight");
  detail::require(p > 0, errc::exponent_out_of_range, "norm exponent must be positive");
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::fabs(f[a]) > std::fabs(f[b]); });
  double best = 0;
  double mass = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double t = std::fabs(f[order[i]]);
    if (t == 0) break;
    while (i < order.size() && std::fabs(f[order[i]]) == t) {
      mass += v[order[i]] * tree.mass(order[i]);
      ++i;
    }
    best = std::max(best, t * std::pow(mass, 1.0 / p));
  }
  return best;
}

inline double weak_lp_norm(const filtration_tree& tree, const simple_function& f, double p) {
  return weak_lp_norm(tree, f, p, weight::unit(tree.leaf_count()));
}

/// sum over B of f * w * mu; with f = 1 this is |B|_w.
template <class T>
T restricted_integral(const basic_filtration_tree<T>& tree, const std::type_identity_t<basic_simple_function<T>>& f,
                      const leaf_set& set, const std::type_identity_t<basic_weight<T>>& w) {
  tree.require_leaf_count(f.size());
  tree.require_leaf_count(w.size(), "weight");
  T sum(0);
  for (auto leaf : set) {
    detail::require(leaf < tree.leaf_count(), errc::index_out_of_range, "leaf index " + std::to_string(leaf));
    sum += f[leaf] * w[leaf] * tree.mass(leaf);
  }
  return sum;
}

/// |B|_w.
inline double weighted_measure(const filtration_tree& tree, const leaf_set& set, const weight& w) {
  return restricted_integral(tree, simple_function::constant(tree.leaf_count(), 1.0), set, w);
}

/// Quasi-triangle constant of L^p: ||a + b|| <= c (||a|| + ||b||) with c = max(2^((1-p)/p), 1).
inline double quasi_norm_constant(double p) {
  detail::require(p > 0, errc::exponent_out_of_range, "norm exponent must be positive");
  return std::max(std::pow(2.0, (1.0 - p) / p), 1.0);
}

/// Hoelder constant for weak spaces: ||XY||_{p,inf} <= c_w ||X||_{p1,inf} ||Y||_{p2,inf}.
///
/// Normalising both factors to weak norm one, {|XY| > l} lies in {|X| > s} u {|Y| > l/s}, whose
/// measure is at most s^-p1 + (l/s)^-p2. Minimising over s gives l^-p * a^-a * b^-b with
/// a = p/p1 and b = p/p2, hence c_w = (p1/p)^(1/p1) * (p2/p)^(1/p2).
inline double weak_holder_constant(const exponent_config& exps) {
  const double p = exps.p();
  return std::pow(exps.p1() / p, 1.0 / exps.p1()) * std::pow(exps.p2() / p, 1.0 / exps.p2());
}

}  // namespace marweight

#endif
