#ifndef MARWEIGHT_MAXIMAL_HPP
#define MARWEIGHT_MAXIMAL_HPP

#include <algorithm>
#include <span>
#include <vector>

#include "marweight/error.hpp"
#include "marweight/filtration_tree.hpp"
#include "marweight/simple_function.hpp"

namespace marweight {

/// |E_n f| * |E_n g| for every level n, as leaf functions. Index n of the result is level n.
template <class T>
std::vector<basic_simple_function<T>> level_products(const basic_filtration_tree<T>& tree,
                                                     const std::type_identity_t<basic_simple_function<T>>& f,
                                                     const std::type_identity_t<basic_simple_function<T>>& g) {
  std::vector<basic_simple_function<T>> out;
  out.reserve(tree.level_count());
  for (std::size_t n = 0; n <= tree.depth(); ++n) {
    const auto ef = atom_averages(tree, f, n);
    const auto eg = atom_averages(tree, g, n);
    std::vector<T> prod(ef.size());
    for (std::size_t a = 0; a < prod.size(); ++a) prod[a] = abs_value(ef[a]) * abs_value(eg[a]);
    out.push_back(broadcast(tree, prod, n));
  }
  return out;
}

/// Pointwise maximum over a family of leaf functions.
template <class T>
basic_simple_function<T> pointwise_max(const std::vector<basic_simple_function<T>>& family) {
  detail::require(!family.empty(), errc::empty_family, "maximum over an empty family");
  std::vector<T> out = family.front().values();
  for (std::size_t k = 1; k < family.size(); ++k) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], family[k][i]);
  }
  return basic_simple_function<T>(std::move(out));
}

/// Mf = max_n |E_n f|.
template <class T>
basic_simple_function<T> doob_maximal(const basic_filtration_tree<T>& tree,
                                      const std::type_identity_t<basic_simple_function<T>>& f) {
  tree.require_leaf_count(f.size());
  std::vector<T> out(tree.leaf_count(), T(0));
  for (std::size_t n = 0; n <= tree.depth(); ++n) {
    const auto avg = atom_averages(tree, f, n);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], T(abs_value(avg[tree.atom_of(n, i)])));
  }
  return basic_simple_function<T>(std::move(out));
}

/// M(f_1, ..., f_m) = max_n prod_i |E_n f_i|. The product is formed level by level before the
/// maximum is taken.
template <class T>
basic_simple_function<T> multisublinear_maximal(const basic_filtration_tree<T>& tree,
                                                std::span<const basic_simple_function<T>> fs) {
  detail::require(!fs.empty(), errc::empty_family, "multisublinear maximal operator needs at least one function");
  for (const auto& f : fs) tree.require_leaf_count(f.size());
  std::vector<T> out(tree.leaf_count(), T(0));
  for (std::size_t n = 0; n <= tree.depth(); ++n) {
    std::vector<T> prod(tree.atom_count(n), T(1));
    for (const auto& f : fs) {
      const auto avg = atom_averages(tree, f, n);
      for (std::size_t a = 0; a < prod.size(); ++a) prod[a] *= abs_value(avg[a]);
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], prod[tree.atom_of(n, i)]);
  }
  return basic_simple_function<T>(std::move(out));
}

template <class T>
basic_simple_function<T> multisublinear_maximal(const basic_filtration_tree<T>& tree,
                                                const std::vector<basic_simple_function<T>>& fs) {
  return multisublinear_maximal(tree, std::span<const basic_simple_function<T>>(fs));
}

/// M(f, g) = max_n |E_n f| |E_n g|; in general smaller than Mf * Mg.
template <class T>
basic_simple_function<T> bisublinear_maximal(const basic_filtration_tree<T>& tree,
                                             const std::type_identity_t<basic_simple_function<T>>& f,
                                             const std::type_identity_t<basic_simple_function<T>>& g) {
  const std::vector<basic_simple_function<T>> fs{f, g};
  return multisublinear_maximal(tree, fs);
}

/// M^v f = max_n |E_n^v f|.
template <class T>
basic_simple_function<T> weighted_maximal(const basic_filtration_tree<T>& tree,
                                          const std::type_identity_t<basic_simple_function<T>>& f,
                                          const std::type_identity_t<basic_weight<T>>& v) {
  tree.require_leaf_count(f.size());
  std::vector<T> out(tree.leaf_count(), T(0));
  for (std::size_t n = 0; n <= tree.depth(); ++n) {
    const auto avg = weighted_atom_averages(tree, f, v, n);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], T(abs_value(avg[tree.atom_of(n, i)])));
  }
  return basic_simple_function<T>(std::move(out));
}

/// |E_n^s1 f| |E_n^s2 g| for every level n.
template <class T>
std::vector<basic_simple_function<T>> weighted_level_products(const basic_filtration_tree<T>& tree,
                                                              const std::type_identity_t<basic_simple_function<T>>& f,
                                                              const std::type_identity_t<basic_simple_function<T>>& g,
                                                              const std::type_identity_t<basic_weight<T>>& s1,
                                                              const std::type_identity_t<basic_weight<T>>& s2) {
  std::vector<basic_simple_function<T>> out;
  out.reserve(tree.level_count());
  for (std::size_t n = 0; n <= tree.depth(); ++n) {
    const auto ef = weighted_atom_averages(tree, f, s1, n);
    const auto eg = weighted_atom_averages(tree, g, s2, n);
    std::vector<T> prod(ef.size());
    for (std::size_t a = 0; a < prod.size(); ++a) prod[a] = abs_value(ef[a]) * abs_value(eg[a]);
    out.push_back(broadcast(tree, prod, n));
  }
  return out;
}

/// M^{s1,s2}(f, g) = max_n |E_n^s1 f| |E_n^s2 g|.
template <class T>
basic_simple_function<T> weighted_bisublinear_maximal(const basic_filtration_tree<T>& tree,
                                                      const std::type_identity_t<basic_simple_function<T>>& f,
                                                      const std::type_identity_t<basic_simple_function<T>>& g,
                                                      const std::type_identity_t<basic_weight<T>>& s1,
                                                      const std::type_identity_t<basic_weight<T>>& s2) {
  return pointwise_max(weighted_level_products(tree, f, g, s1, s2));
}

}  // namespace marweight

#endif
