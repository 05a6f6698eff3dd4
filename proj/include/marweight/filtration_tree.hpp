#ifndef MARWEIGHT_FILTRATION_TREE_HPP
#define MARWEIGHT_FILTRATION_TREE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "marweight/error.hpp"
#include "marweight/rational.hpp"
#include "marweight/simple_function.hpp"

namespace marweight {

/// One level of a filtration: disjoint atoms (sets of leaf indices) covering every leaf.
using partition = std::vector<std::vector<std::size_t>>;

struct atom_ref {
  std::size_t level = 0;
  std::size_t index = 0;
  friend bool operator==(const atom_ref&, const atom_ref&) = default;
};

enum class violation_kind {
  empty_filtration,
  non_positive_mass,
  mass_sum_not_one,
  empty_atom,
  leaf_out_of_range,
  not_disjoint,
  not_covering,
  not_refining,
  final_level_not_singletons,
};

struct tree_violation {
  violation_kind kind;
  std::size_t level = 0;
  std::size_t atom = 0;
  std::string message;
};

using validation_report = std::vector<tree_violation>;

/// Checks every structural invariant of a filtered probability space given as raw data.
/// An empty report means the data describes a valid tree.
template <class T>
validation_report validate(const std::vector<T>& masses, const std::vector<partition>& levels) {
  validation_report report;
  const std::size_t leaves = masses.size();
  if (leaves == 0 || levels.empty()) {
    report.push_back({violation_kind::empty_filtration, 0, 0, "tree needs at least one leaf and one level"});
    return report;
  }

  T total(0);
  for (std::size_t i = 0; i < leaves; ++i) {
    if (!(masses[i] > T(0))) {
      report.push_back({violation_kind::non_positive_mass, levels.size() - 1, i,
                        "mass of leaf " + std::to_string(i) + " is not positive"});
    }
    total += masses[i];
  }
  if constexpr (scalar_traits<T>::exact) {
    if (total != T(1)) report.push_back({violation_kind::mass_sum_not_one, 0, 0, "masses sum to " + format_rational(total)});
  } else {
    if (!(std::fabs(total - 1.0) <= mass_tolerance)) {
      report.push_back({violation_kind::mass_sum_not_one, 0, 0, "masses sum to " + std::to_string(total)});
    }
  }

  // owner[n][leaf] = atom index at level n, or npos when uncovered / out of range.
  constexpr auto npos = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> owner(levels.size(), std::vector<std::size_t>(leaves, npos));
  for (std::size_t n = 0; n < levels.size(); ++n) {
    for (std::size_t a = 0; a < levels[n].size(); ++a) {
      const auto& atom = levels[n][a];
      if (atom.empty()) report.push_back({violation_kind::empty_atom, n, a, "empty atom"});
      for (auto leaf : atom) {
        if (leaf >= leaves) {
          report.push_back({violation_kind::leaf_out_of_range, n, a, "leaf index " + std::to_string(leaf) + " out of range"});
          continue;
        }
        if (owner[n][leaf] != npos) {
          report.push_back({violation_kind::not_disjoint, n, a,
                            "leaf " + std::to_string(leaf) + " belongs to more than one atom"});
          continue;
        }
        owner[n][leaf] = a;
      }
    }
    for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
      if (owner[n][leaf] == npos) {
        report.push_back({violation_kind::not_covering, n, 0, "leaf " + std::to_string(leaf) + " not covered"});
      }
    }
  }

  for (std::size_t n = 0; n + 1 < levels.size(); ++n) {
    for (std::size_t a = 0; a < levels[n + 1].size(); ++a) {
      std::size_t parent = npos;
      bool ok = true;
      for (auto leaf : levels[n + 1][a]) {
        if (leaf >= leaves) continue;
        const auto p = owner[n][leaf];
        if (parent == npos) {
          parent = p;
        } else if (p != parent) {
          ok = false;
        }
      }
      if (!ok) {
        report.push_back({violation_kind::not_refining, n + 1, a, "atom is not contained in a single atom of the coarser level"});
      }
    }
  }

  const auto& finest = levels.back();
  for (std::size_t a = 0; a < finest.size(); ++a) {
    if (finest[a].size() != 1) {
      report.push_back({violation_kind::final_level_not_singletons, levels.size() - 1, a, "finest atom is not a singleton"});
    }
  }
  return report;
}

/// A finite filtered probability space: leaf masses plus refining partitions P_0, ..., P_N.
/// Immutable after construction.
template <class T = double>
class basic_filtration_tree {
 public:
  using scalar = T;

  basic_filtration_tree(std::vector<T> masses, std::vector<partition> levels)
      : masses_(std::move(masses)), levels_(std::move(levels)) {
    const auto report = validate(masses_, levels_);
    if (!report.empty()) {
      const auto& first = report.front();
      const errc code = first.kind == violation_kind::non_positive_mass   ? errc::non_positive_mass
                        : first.kind == violation_kind::mass_sum_not_one ? errc::mass_sum_not_one
                                                                         : errc::invalid_tree;
      detail::fail(code, first.message);
    }
    index();
  }

  std::size_t leaf_count() const noexcept { return masses_.size(); }
  /// N: the index of the finest level.
  std::size_t depth() const noexcept { return levels_.size() - 1; }
  std::size_t level_count() const noexcept { return levels_.size(); }

  const std::vector<T>& masses() const noexcept { return masses_; }
  const T& mass(std::size_t leaf) const { return masses_[leaf]; }
  const std::vector<partition>& levels() const noexcept { return levels_; }
  const partition& atoms(std::size_t n) const { return levels_[n]; }
  std::size_t atom_count(std::size_t n) const { return levels_[n].size(); }
  const std::vector<std::size_t>& atom_leaves(std::size_t n, std::size_t a) const { return levels_[n][a]; }
  std::size_t atom_of(std::size_t n, std::size_t leaf) const { return atom_of_[n][leaf]; }
  const T& atom_mass(std::size_t n, std::size_t a) const { return atom_mass_[n][a]; }
  /// Atom of level n-1 containing atom a of level n (n >= 1).
  std::size_t parent(std::size_t n, std::size_t a) const { return parent_[n][a]; }
  /// Atoms of level n+1 inside atom a of level n (n < N).
  const std::vector<std::size_t>& children(std::size_t n, std::size_t a) const { return children_[n][a]; }

  void require_level(std::size_t n) const {
    if (n > depth()) {
      detail::fail(errc::level_out_of_range, "level " + std::to_string(n) + " exceeds N = " + std::to_string(depth()));
    }
  }

  void require_leaf_count(std::size_t size, const char* what = "function") const {
    detail::require_same_size(leaf_count(), size, what);
  }

  friend bool operator==(const basic_filtration_tree& a, const basic_filtration_tree& b) {
    return a.masses_ == b.masses_ && a.levels_ == b.levels_;
  }

 private:
  void index() {
    const std::size_t levels = levels_.size();
    atom_of_.assign(levels, std::vector<std::size_t>(leaf_count()));
    atom_mass_.resize(levels);
    parent_.resize(levels);
    children_.resize(levels);
    for (std::size_t n = 0; n < levels; ++n) {
      atom_mass_[n].assign(levels_[n].size(), T(0));
      for (std::size_t a = 0; a < levels_[n].size(); ++a) {
        for (auto leaf : levels_[n][a]) {
          atom_of_[n][leaf] = a;
          atom_mass_[n][a] += masses_[leaf];
        }
      }
    }
    for (std::size_t n = 0; n < levels; ++n) {
      children_[n].assign(levels_[n].size(), {});
      parent_[n].assign(levels_[n].size(), 0);
    }
    for (std::size_t n = 1; n < levels; ++n) {
      for (std::size_t a = 0; a < levels_[n].size(); ++a) {
        const auto p = atom_of_[n - 1][levels_[n][a].front()];
        parent_[n][a] = p;
        children_[n - 1][p].push_back(a);
      }
    }
  }

  std::vector<T> masses_;
  std::vector<partition> levels_;
  std::vector<std::vector<std::size_t>> atom_of_;
  std::vector<std::vector<T>> atom_mass_;
  std::vector<std::vector<std::size_t>> parent_;
  std::vector<std::vector<std::vector<std::size_t>>> children_;
};

using filtration_tree = basic_filtration_tree<double>;
using exact_tree = basic_filtration_tree<rational>;

template <class T>
validation_report validate(const basic_filtration_tree<T>& tree) {
  return validate(tree.masses(), tree.levels());
}

/// Tree whose level n splits every atom of level n-1 into `branching[n-1]` consecutive blocks.
/// Uniform masses when none are given; P_0 = {Omega}.
template <class T = double>
basic_filtration_tree<T> build_regular(const std::vector<std::size_t>& branching,
                                       std::optional<std::vector<T>> masses = std::nullopt) {
  std::size_t leaves = 1;
  for (auto b : branching) {
    detail::require(b >= 1, errc::bad_length, "branching factor must be at least 1");
    leaves *= b;
  }
  std::vector<partition> levels;
  std::size_t block = leaves;
  levels.push_back({});
  for (std::size_t n = 0; n <= branching.size(); ++n) {
    if (n > 0) block /= branching[n - 1];
    partition level;
    for (std::size_t start = 0; start < leaves; start += block) {
      std::vector<std::size_t> atom(block);
      for (std::size_t i = 0; i < block; ++i) atom[i] = start + i;
      level.push_back(std::move(atom));
    }
    if (n == 0) {
      levels.front() = std::move(level);
    } else {
      levels.push_back(std::move(level));
    }
  }
  if (masses) {
    if (masses->size() != leaves) {
      detail::fail(errc::bad_length,
                   "expected " + std::to_string(leaves) + " masses, got " + std::to_string(masses->size()));
    }
    return basic_filtration_tree<T>(std::move(*masses), std::move(levels));
  }
  return basic_filtration_tree<T>(std::vector<T>(leaves, T(1) / T(leaves)), std::move(levels));
}

/// Dyadic tree of the given depth: P_n consists of blocks of 2^(depth-n) consecutive leaves.
template <class T = double>
basic_filtration_tree<T> build_dyadic(std::size_t depth, std::optional<std::vector<T>> masses = std::nullopt) {
  detail::require(depth < 31, errc::bad_length, "dyadic depth too large");
  return build_regular<T>(std::vector<std::size_t>(depth, 2), std::move(masses));
}

template <class T>
basic_filtration_tree<T> build_dyadic(std::size_t depth, std::vector<T> masses) {
  return build_dyadic<T>(depth, std::optional<std::vector<T>>(std::move(masses)));
}

inline filtration_tree to_double(const exact_tree& tree) {
  std::vector<double> masses(tree.leaf_count());
  for (std::size_t i = 0; i < masses.size(); ++i) masses[i] = to_double(tree.mass(i));
  std::vector<partition> levels = tree.levels();
  // Rounding can move the sum off 1 by a few ulps; validation tolerates that.
  return filtration_tree(std::move(masses), std::move(levels));
}

/// Per-atom averages of f at level n: (sum over A of f*mu) / mu(A).
template <class T>
std::vector<T> atom_averages(const basic_filtration_tree<T>& tree,
                             const std::type_identity_t<basic_simple_function<T>>& f, std::size_t n) {
  tree.require_level(n);
  tree.require_leaf_count(f.size());
  const auto& atoms = tree.atoms(n);
  std::vector<T> out(atoms.size());
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const auto& leaves = atoms[a];
    if (leaves.size() == 1) {
      out[a] = f[leaves.front()];
      continue;
    }
    T sum(0);
    for (auto leaf : leaves) sum += f[leaf] * tree.mass(leaf);
    out[a] = sum / tree.atom_mass(n, a);
  }
  return out;
}

/// Spreads per-atom values of level n back onto the leaves.
template <class T>
basic_simple_function<T> broadcast(const basic_filtration_tree<T>& tree, const std::vector<T>& per_atom, std::size_t n) {
  std::vector<T> out(tree.leaf_count());
  for (std::size_t leaf = 0; leaf < out.size(); ++leaf) out[leaf] = per_atom[tree.atom_of(n, leaf)];
  return basic_simple_function<T>(std::move(out));
}

/// E_n f: constant on the atoms of P_n.
template <class T>
basic_simple_function<T> conditional_expectation(const basic_filtration_tree<T>& tree,
                                                 const std::type_identity_t<basic_simple_function<T>>& f,
                                                 std::size_t n) {
  return broadcast(tree, atom_averages(tree, f, n), n);
}

/// Per-atom values of E_n^v f = E_n(f v) / E_n(v).
template <class T>
std::vector<T> weighted_atom_averages(const basic_filtration_tree<T>& tree,
                                      const std::type_identity_t<basic_simple_function<T>>& f,
                                      const std::type_identity_t<basic_weight<T>>& v, std::size_t n) {
  tree.require_level(n);
  tree.require_leaf_count(f.size());
  tree.require_leaf_count(v.size(), "weight");
  const auto& atoms = tree.atoms(n);
  std::vector<T> out(atoms.size());
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const auto& leaves = atoms[a];
    if (leaves.size() == 1) {
      out[a] = f[leaves.front()];
      continue;
    }
    T num(0);
    T den(0);
    for (auto leaf : leaves) {
      const T vm = v[leaf] * tree.mass(leaf);
      num += f[leaf] * vm;
      den += vm;
    }
    out[a] = num / den;
  }
  return out;
}

/// E_n^v f: conditional expectation under the probability measure v dmu / |Omega|_v.
template <class T>
basic_simple_function<T> weighted_conditional_expectation(const basic_filtration_tree<T>& tree,
                                                          const std::type_identity_t<basic_simple_function<T>>& f,
                                                          const std::type_identity_t<basic_weight<T>>& v,
                                                          std::size_t n) {
  return broadcast(tree, weighted_atom_averages(tree, f, v, n), n);
}

/// Integral of f against mu.
template <class T>
T integral(const basic_filtration_tree<T>& tree, const std::type_identity_t<basic_simple_function<T>>& f) {
  tree.require_leaf_count(f.size());
  T sum(0);
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * tree.mass(i);
  return sum;
}

}  // namespace marweight

#endif
