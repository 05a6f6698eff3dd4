#ifndef MARWEIGHT_INSTANCE_HPP
#define MARWEIGHT_INSTANCE_HPP

#include <optional>
#include <utility>

#include "marweight/filtration_tree.hpp"
#include "marweight/simple_function.hpp"

namespace marweight {

/// Everything one run needs: a tree, the weight triple, exponents and optionally a pair of functions.
struct instance {
  filtration_tree tree;
  /// Set when the masses were given as exact rationals; `tree` is then its double image.
  std::optional<exact_tree> exact;
  weight v, w1, w2;
  exponent_config exps{2, 2};
  std::optional<simple_function> f, g;

  explicit instance(filtration_tree t)
      : tree(std::move(t)),
        v(weight::unit(tree.leaf_count())),
        w1(weight::unit(tree.leaf_count())),
        w2(weight::unit(tree.leaf_count())) {}

  explicit instance(exact_tree t) : instance(to_double(t)) { exact = std::move(t); }

  std::size_t leaf_count() const { return tree.leaf_count(); }

  void validate() const {
    tree.require_leaf_count(v.size(), "v");
    tree.require_leaf_count(w1.size(), "w1");
    tree.require_leaf_count(w2.size(), "w2");
    if (f) tree.require_leaf_count(f->size(), "f");
    if (g) tree.require_leaf_count(g->size(), "g");
  }

  friend bool operator==(const instance&, const instance&) = default;
};

}  // namespace marweight

#endif
