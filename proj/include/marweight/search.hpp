// Seeded instance generation and coordinate hill climbing on ratios of the theorem constants.
#ifndef MARWEIGHT_SEARCH_HPP
#define MARWEIGHT_SEARCH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "marweight/conditions.hpp"
#include "marweight/error.hpp"
#include "marweight/filtration_tree.hpp"
#include "marweight/instance.hpp"
#include "marweight/maximal.hpp"
#include "marweight/norms.hpp"
#include "marweight/random.hpp"
#include "marweight/theorem_lab.hpp"

namespace marweight {

struct generator_config {
  std::size_t depth = 2;
  double weight_sigma = 1.0;
  double function_sigma = 1.0;
  /// v = w1^(p/p1) w2^(p/p2) instead of an independent draw.
  bool coupled_v = false;
  /// w2 = w1.
  bool equal_weights = false;
  bool nonneg = false;
  bool random_masses = false;
  double p1 = 2, p2 = 2;

  void validate() const {
    detail::require(depth <= 8, errc::bad_spec, "depth must be at most 8");
    detail::require(p1 > 1 && p1 < 16 && p2 > 1 && p2 < 16, errc::bad_spec, "exponents must lie in (1, 16)");
    detail::require(weight_sigma >= 0 && std::isfinite(weight_sigma) && function_sigma >= 0 && std::isfinite(function_sigma),
                    errc::bad_spec, "log-normal parameters must be finite and nonnegative");
  }
};

/// v = w1^(p/p1) w2^(p/p2).
inline weight coupled_weight(const weight& w1, const weight& w2, const exponent_config& exps) {
  std::vector<double> out(w1.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::pow(w1[i], exps.share1()) * std::pow(w2[i], exps.share2());
  return weight(std::move(out));
}

inline instance random_instance(const generator_config& config, std::uint64_t seed) {
  config.validate();
  auto rng = make_rng(seed);
  const std::size_t leaves = std::size_t{1} << config.depth;
  std::optional<std::vector<double>> masses;
  if (config.random_masses) {
    std::vector<double> m(leaves);
    double total = 0;
    for (auto& x : m) total += x = log_normal(rng, 0.5);
    for (auto& x : m) x /= total;
    masses = std::move(m);
  }
  instance out(build_dyadic<double>(config.depth, masses));
  out.exps = exponent_config(config.p1, config.p2);
  auto draw = [&] {
    std::vector<double> w(leaves);
    for (auto& x : w) x = log_normal(rng, config.weight_sigma);
    return weight(std::move(w));
  };
  out.w1 = draw();
  out.w2 = config.equal_weights ? out.w1 : draw();
  out.v = config.coupled_v ? coupled_weight(out.w1, out.w2, out.exps) : draw();
  auto function = [&] {
    std::vector<double> h(leaves);
    for (auto& x : h) {
      x = log_normal(rng, config.function_sigma);
      if (!config.nonneg && bernoulli(rng, 0.5)) x = -x;
    }
    return simple_function(std::move(h));
  };
  out.f = function();
  out.g = function();
  return out;
}

enum class objective_kind { weak_over_apvec, apvec_over_stopped_times_rh, strong_over_spvec_rh, rh_violation_probe };

inline constexpr std::array<std::string_view, 4> objective_names{
    "weak_over_apvec", "apvec_over_stopped_times_rh", "strong_over_spvec_rh", "rh_violation_probe"};

inline std::string_view to_string(objective_kind k) { return objective_names[static_cast<std::size_t>(k)]; }

inline objective_kind parse_objective(std::string_view name) {
  for (std::size_t i = 0; i < objective_names.size(); ++i)
    if (objective_names[i] == name) return static_cast<objective_kind>(i);
  detail::fail(errc::bad_spec, "unknown objective '" + std::string(name) + "'");
}

/// Raised when an objective cannot be evaluated; carries the offending instance.
class objective_failure : public error {
 public:
  objective_failure(const std::string& what, instance inst)
      : error(errc::objective_evaluation_failure, what), instance_(std::move(inst)) {}
  const instance& offending() const noexcept { return instance_; }

 private:
  instance instance_;
};

struct search_options {
  /// Exact subset suprema up to `conditions.cap` leaves, sampled (seeded) above.
  condition_options conditions;
  bool coupled_v = false;
  bool perturb_masses = false;
  std::size_t restarts = 1;
};

namespace detail {

inline condition_options conditions_for(const instance& inst, const condition_options& base) {
  auto out = base;
  if (inst.leaf_count() > base.cap) out.mode = search_mode::sampled;
  return out;
}

/// (s1 chi_A, s2 chi_A) over every atom A, then the instance's own pair when it has one.
inline std::vector<std::pair<simple_function, simple_function>> probe_pairs(const instance& inst, const weight& s1,
                                                                            const weight& s2, bool sigma_data) {
  std::vector<std::pair<simple_function, simple_function>> out;
  const auto n = inst.leaf_count();
  const auto one = simple_function::constant(n, 1.0);
  for (std::size_t lvl = 0; lvl <= inst.tree.depth(); ++lvl) {
    for (std::size_t a = 0; a < inst.tree.atom_count(lvl); ++a) {
      const auto& atom = inst.tree.atom_leaves(lvl, a);
      if (sigma_data) {
        out.emplace_back(restrict_to(one, atom), restrict_to(one, atom));
      } else {
        out.emplace_back(restrict_to(s1.function(), atom), restrict_to(s2.function(), atom));
      }
    }
  }
  if (inst.f && inst.g && !inst.f->is_zero() && !inst.g->is_zero()) out.emplace_back(*inst.f, *inst.g);
  return out;
}

inline double evaluate_unchecked(objective_kind kind, const instance& inst, const condition_options& base) {
  const auto& e = inst.exps;
  const auto conditions = conditions_for(inst, base);
  const auto s1 = dual_weight(inst.w1, e.p1());
  const auto s2 = dual_weight(inst.w2, e.p2());
  switch (kind) {
    case objective_kind::weak_over_apvec: {
      const double a = a_vec_p_constant(inst.tree, inst.v, inst.w1, inst.w2, e).value;
      double weak = 0;
      for (const auto& [f, g] : probe_pairs(inst, s1, s2, false))
        weak = std::max(weak, weak_bilinear_ratio(inst.tree, inst.v, inst.w1, inst.w2, e, f, g));
      return weak / a;
    }
    case objective_kind::apvec_over_stopped_times_rh: {
      const double a = a_vec_p_constant(inst.tree, inst.v, inst.w1, inst.w2, e).value;
      const double rh = rh_constant(inst.tree, inst.w1, inst.w2, e, conditions).value;
      double c1 = 0;
      for (const auto& [f, g] : probe_pairs(inst, s1, s2, false))
        c1 = std::max(c1, best_stopped_ratio(inst.tree, inst.v, inst.w1, inst.w2, e, f, g).ratio);
      return std::pow(a / c1, e.p()) / rh;
    }
    case objective_kind::strong_over_spvec_rh: {
      const double cs = s_vec_p_constant(inst.tree, inst.v, inst.w1, inst.w2, e, conditions).value;
      const double rh = rh_constant(inst.tree, inst.w1, inst.w2, e, conditions).value;
      const double bound = 4 * std::pow(std::pow(cs, e.p()) * rh, e.inv_p()) * e.p1_conj() * e.p2_conj();
      double strong = 0;
      for (const auto& [f, g] : probe_pairs(inst, s1, s2, true)) {
        const auto m = bisublinear_maximal(inst.tree, pointwise_product(f, s1.function()), pointwise_product(g, s2.function()));
        strong = std::max(strong, lp_norm(inst.tree, m, e.p(), inst.v) / norm_product(inst.tree, f, g, s1, s2, e));
      }
      return strong / bound;
    }
    case objective_kind::rh_violation_probe:
      return rh_constant(inst.tree, inst.w1, inst.w2, e, conditions).value;
  }
  return 0;
}

}  // namespace detail

/// Objective value of one instance. Ratios that the theorems bound: weak_over_apvec <= c_w,
/// apvec_over_stopped_times_rh <= 1, strong_over_spvec_rh <= 1; rh_violation_probe is C_RH >= 1.
inline double evaluate_objective(objective_kind kind, const instance& inst, const condition_options& conditions = {}) {
  double value = 0;
  try {
    inst.validate();
    value = detail::evaluate_unchecked(kind, inst, conditions);
  } catch (const error& e) {
    throw objective_failure(std::string(to_string(kind)) + ": " + e.what(), inst);
  }
  if (!std::isfinite(value)) throw objective_failure(std::string(to_string(kind)) + " is not finite", inst);
  return value;
}

struct search_result {
  objective_kind objective = objective_kind::weak_over_apvec;
  double best_value = 0;
  instance best_instance;
  std::vector<std::pair<std::size_t, double>> trace;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::size_t restart = 0;
};

namespace detail {

inline search_result climb_once(objective_kind kind, const instance& start, std::size_t budget, std::uint64_t seed,
                                const search_options& options) {
  auto rng = make_rng(seed);
  instance best = start;
  double best_value = evaluate_objective(kind, best, options.conditions);
  std::vector<std::pair<std::size_t, double>> trace{{0, best_value}};
  const auto leaves = start.leaf_count();
  const std::size_t vectors = (options.coupled_v ? 2 : 3) + (options.perturb_masses ? 1 : 0);

  for (std::size_t it = 0; it < budget; ++it) {
    const double t = budget > 1 ? static_cast<double>(it) / static_cast<double>(budget - 1) : 0.0;
    const double delta = 0.5 * std::pow(0.01 / 0.5, t);
    const auto which = bounded(rng, vectors);
    const auto leaf = bounded(rng, leaves);
    const double factor = std::exp(bernoulli(rng, 0.5) ? delta : -delta);

    instance cand = best;
    auto scale = [&](const weight& w) {
      auto values = w.function().values();
      values[leaf] *= factor;
      return weight(std::move(values));
    };
    const std::size_t mass_slot = options.coupled_v ? 2 : 3;
    if (options.perturb_masses && which == mass_slot) {
      auto masses = cand.tree.masses();
      masses[leaf] *= factor;
      double total = 0;
      for (auto m : masses) total += m;
      for (auto& m : masses) m /= total;
      cand = instance(filtration_tree(std::move(masses), best.tree.levels()));
      cand.v = best.v;
      cand.w1 = best.w1;
      cand.w2 = best.w2;
      cand.exps = best.exps;
      cand.f = best.f;
      cand.g = best.g;
    } else if (which == 0) {
      cand.w1 = scale(best.w1);
    } else if (which == 1) {
      cand.w2 = scale(best.w2);
    } else {
      cand.v = scale(best.v);
    }
    if (options.coupled_v) cand.v = coupled_weight(cand.w1, cand.w2, cand.exps);

    const double value = evaluate_objective(kind, cand, options.conditions);
    if (value > best_value) {
      best_value = value;
      best = std::move(cand);
      trace.emplace_back(it + 1, value);
    }
  }
  return {kind, best_value, std::move(best), std::move(trace), seed, budget, 0};
}

}  // namespace detail

/// Multiplicative coordinate search: each step scales one leaf of w1, w2 or v (or a mass, renormalized)
/// by exp(+-delta), delta going geometrically from 0.5 to 0.01, and keeps strict improvements only.
/// Restarts use derived seeds; the best value wins, ties go to the lowest restart.
inline search_result hill_climb(objective_kind kind, const instance& start, std::size_t budget, std::uint64_t seed,
                                const search_options& options = {}) {
  detail::require(options.restarts >= 1, errc::bad_spec, "at least one restart is needed");
  std::optional<search_result> best;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    auto res = detail::climb_once(kind, start, budget, derive_seed(seed, r), options);
    res.seed = seed;
    res.restart = r;
    if (!best || res.best_value > best->best_value) best = std::move(res);
  }
  return std::move(*best);
}

struct probe_entry {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double apvec = 0, c1 = 0, rh = 0;
  /// Apvec^p / (C1^p C_RH); at most one when the stopped inequality implies the A-vector condition.
  double gap = 0;
  /// Apvec exceeds C1, which the theory allows only through C_RH > 1.
  bool apvec_above_c1 = false;
  bool consistent = true;
  /// For inconsistent entries: whether the weak-chain verifier rejects the instance too.
  std::optional<bool> verifier_rejects;
  instance inst;
};

struct probe_report {
  std::size_t evaluated = 0;
  std::size_t inconsistent = 0;
  std::size_t apvec_above_c1 = 0;
  /// Sorted by gap, largest first; ties by index.
  std::vector<probe_entry> ranked;
};

/// Draws `budget` random instances and ranks them by how close Apvec^p <= C1^p C_RH is to equality.
inline probe_report necessity_probe(std::size_t budget, std::uint64_t seed, generator_config config = {},
                                    std::size_t keep = 25, const condition_options& conditions = {}) {
  config.validate();
  probe_report out;
  for (std::size_t i = 0; i < budget; ++i) {
    probe_entry e{.index = i, .seed = derive_seed(seed, i), .inst = random_instance(config, derive_seed(seed, i))};
    const auto& inst = e.inst;
    const auto s1 = dual_weight(inst.w1, inst.exps.p1());
    const auto s2 = dual_weight(inst.w2, inst.exps.p2());
    e.apvec = a_vec_p_constant(inst.tree, inst.v, inst.w1, inst.w2, inst.exps).value;
    e.rh = rh_constant(inst.tree, inst.w1, inst.w2, inst.exps, detail::conditions_for(inst, conditions)).value;
    for (const auto& [f, g] : detail::probe_pairs(inst, s1, s2, false))
      e.c1 = std::max(e.c1, best_stopped_ratio(inst.tree, inst.v, inst.w1, inst.w2, inst.exps, f, g).ratio);
    const double p = inst.exps.p();
    e.gap = std::pow(e.apvec / e.c1, p) / e.rh;
    e.apvec_above_c1 = !leq_tol(e.apvec, e.c1);
    e.consistent = leq_tol(std::pow(e.apvec, p), std::pow(e.c1, p) * e.rh);
    if (!e.consistent) {
      lab_options lab;
      lab.seed = e.seed;
      lab.conditions = detail::conditions_for(inst, conditions);
      e.verifier_rejects = !verify_weak_equivalences(inst.tree, inst.v, inst.w1, inst.w2, inst.exps, lab).passed();
      ++out.inconsistent;
    }
    if (e.apvec_above_c1) ++out.apvec_above_c1;
    ++out.evaluated;
    out.ranked.push_back(std::move(e));
    std::stable_sort(out.ranked.begin(), out.ranked.end(),
                     [](const probe_entry& a, const probe_entry& b) { return a.gap > b.gap; });
    if (out.ranked.size() > keep) out.ranked.pop_back();
  }
  return out;
}

}  // namespace marweight

#endif
