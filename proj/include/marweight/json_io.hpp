// JSON for instance bundles and every report type.
#ifndef MARWEIGHT_JSON_IO_HPP
#define MARWEIGHT_JSON_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "marweight/conditions.hpp"
#include "marweight/error.hpp"
#include "marweight/instance.hpp"
#include "marweight/oracle.hpp"
#include "marweight/rational.hpp"
#include "marweight/report.hpp"
#include "marweight/sawyer.hpp"
#include "marweight/search.hpp"

namespace marweight {

using json = nlohmann::ordered_json;

namespace detail {

inline rational json_rational(const json& x, const char* what) {
  if (x.is_string()) return parse_rational(x.get<std::string>());
  if (x.is_number_integer()) return rational(x.get<long long>());
  if (x.is_number()) return rational(x.get<double>());
  fail(errc::parse_error, std::string(what) + ": expected a number or a \"p/q\" string");
}

inline double json_number(const json& x, const char* what) {
  if (x.is_number()) return x.get<double>();
  return to_double(json_rational(x, what));
}

inline std::vector<double> json_numbers(const json& x, const char* what) {
  require(x.is_array(), errc::parse_error, std::string(what) + ": expected an array");
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& e : x) out.push_back(json_number(e, what));
  return out;
}

inline const json* member(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline json double_array(const std::vector<double>& values) {
  json out = json::array();
  for (double x : values) out.push_back(x);
  return out;
}

}  // namespace detail

/// Tree section: {"masses": [...], "levels": [[[leaf, ...], ...], ...]} or {"dyadic": depth, "masses"?: [...]}.
/// Any mass written as a "p/q" string makes the whole tree exact.
inline instance tree_from_json(const json& t) {
  using detail::member;
  detail::require(t.is_object(), errc::parse_error, "tree: expected an object");
  const json* masses = member(t, "masses");
  bool exact = false;
  if (masses) {
    detail::require(masses->is_array(), errc::parse_error, "tree.masses: expected an array");
    for (const auto& m : *masses) exact = exact || m.is_string();
  }
  std::vector<partition> levels;
  if (const json* d = member(t, "dyadic")) {
    detail::require(d->is_number_unsigned() && d->get<std::size_t>() <= 20, errc::parse_error, "tree.dyadic: expected a depth");
    const auto depth = d->get<std::size_t>();
    const std::size_t leaves = std::size_t{1} << depth;
    for (std::size_t n = 0; n <= depth; ++n) {
      const std::size_t width = leaves >> n;
      partition p;
      for (std::size_t a = 0; a < (std::size_t{1} << n); ++a) {
        std::vector<std::size_t> atom(width);
        for (std::size_t i = 0; i < width; ++i) atom[i] = a * width + i;
        p.push_back(std::move(atom));
      }
      levels.push_back(std::move(p));
    }
  } else {
    const json* l = member(t, "levels");
    detail::require(l && l->is_array(), errc::parse_error, "tree.levels: expected an array of partitions");
    try {
      levels = l->get<std::vector<partition>>();
    } catch (const nlohmann::json::exception& e) {
      detail::fail(errc::parse_error, std::string("tree.levels: ") + e.what());
    }
  }
  detail::require(!levels.empty() && !levels.back().empty(), errc::parse_error, "tree: no levels");
  std::size_t leaves = 0;
  for (const auto& atom : levels.back()) leaves += atom.size();
  if (exact) {
    std::vector<rational> m;
    for (const auto& x : *masses) m.push_back(detail::json_rational(x, "tree.masses"));
    return instance(exact_tree(std::move(m), std::move(levels)));
  }
  std::vector<double> m = masses ? detail::json_numbers(*masses, "tree.masses")
                                 : std::vector<double>(leaves, 1.0 / static_cast<double>(leaves));
  return instance(filtration_tree(std::move(m), std::move(levels)));
}

/// Reads an instance bundle; "weights", "exponents" and "functions" are optional
/// (unit weights, p1 = p2 = 2, no functions).
inline instance instance_from_json(const json& j) {
  using detail::member;
  detail::require(j.is_object(), errc::parse_error, "instance: expected an object");
  const json* t = member(j, "tree");
  detail::require(t != nullptr, errc::parse_error, "instance: missing \"tree\"");
  auto inst = tree_from_json(*t);
  if (const json* w = member(j, "weights")) {
    detail::require(w->is_object(), errc::parse_error, "weights: expected an object");
    if (const json* x = member(*w, "v")) inst.v = weight(detail::json_numbers(*x, "weights.v"));
    if (const json* x = member(*w, "w1")) inst.w1 = weight(detail::json_numbers(*x, "weights.w1"));
    if (const json* x = member(*w, "w2")) inst.w2 = weight(detail::json_numbers(*x, "weights.w2"));
  }
  if (const json* e = member(j, "exponents")) {
    detail::require(e->is_object() && member(*e, "p1") && member(*e, "p2"), errc::parse_error,
                    "exponents: expected {\"p1\": ..., \"p2\": ...}");
    inst.exps = exponent_config(detail::json_number(e->at("p1"), "p1"), detail::json_number(e->at("p2"), "p2"));
  }
  if (const json* fs = member(j, "functions")) {
    detail::require(fs->is_object(), errc::parse_error, "functions: expected an object");
    if (const json* x = member(*fs, "f")) inst.f = simple_function(detail::json_numbers(*x, "functions.f"));
    if (const json* x = member(*fs, "g")) inst.g = simple_function(detail::json_numbers(*x, "functions.g"));
  }
  inst.validate();
  return inst;
}

inline instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    detail::fail(errc::parse_error, e.what());
  }
  try {
    return instance_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    detail::fail(errc::parse_error, e.what());
  }
}

inline json to_json(const instance& inst) {
  json tree;
  if (inst.exact) {
    json m = json::array();
    for (const auto& x : inst.exact->masses()) m.push_back(format_rational(x));
    tree["masses"] = std::move(m);
  } else {
    tree["masses"] = detail::double_array(inst.tree.masses());
  }
  tree["levels"] = inst.tree.levels();
  json out;
  out["tree"] = std::move(tree);
  out["weights"] = {{"v", detail::double_array(inst.v.function().values())},
                    {"w1", detail::double_array(inst.w1.function().values())},
                    {"w2", detail::double_array(inst.w2.function().values())}};
  out["exponents"] = {{"p1", inst.exps.p1()}, {"p2", inst.exps.p2()}};
  if (inst.f || inst.g) {
    json fs = json::object();
    if (inst.f) fs["f"] = detail::double_array(inst.f->values());
    if (inst.g) fs["g"] = detail::double_array(inst.g->values());
    out["functions"] = std::move(fs);
  }
  return out;
}

inline json to_json(const condition_constant& c) {
  json out;
  out["value"] = c.value;
  out["witness_kind"] = c.kind == witness_kind::atom ? "atom" : "set";
  out["witness"] = c.witness;
  out["exact"] = c.exact;
  return out;
}

inline json to_json(const stopping_time& tau) { return tau.values(); }

inline json to_json(const proof_chain_report& rep) {
  json out;
  out["passed"] = rep.passed();
  out["failures"] = rep.failures();
  out["margin"] = rep.margin();
  json constants = json::object();
  for (const auto& [k, v] : rep.constants()) constants[k] = v;
  out["constants"] = std::move(constants);
  json steps = json::array();
  for (const auto& s : rep.steps()) {
    steps.push_back({{"step", s.step},
                     {"lhs", s.lhs},
                     {"rhs", s.rhs},
                     {"constant", s.constant},
                     {"pass", s.pass},
                     {"checks", s.checks},
                     {"failures", s.failures}});
  }
  out["steps"] = std::move(steps);
  if (const auto& w = rep.failure()) {
    out["failure"] = {{"step", w->step},
                      {"trial", w->trial},
                      {"f", detail::double_array(w->f.values())},
                      {"g", detail::double_array(w->g.values())}};
  }
  json trials = json::array();
  for (const auto& t : rep.trials()) {
    json row = {{"trial", t.trial}};
    for (const auto& [k, v] : t.values) row[k] = v;
    trials.push_back(std::move(row));
  }
  out["trials"] = std::move(trials);
  return out;
}

inline json to_json(const sawyer_decomposition& d) {
  json out;
  out["k_min"] = d.k_min;
  out["k_max"] = d.k_max;
  json taus = json::array();
  for (int k = d.k_min; k <= d.k_max + 1; ++k) taus.push_back({{"k", k}, {"tau", to_json(d.tau(k))}});
  out["taus"] = std::move(taus);
  json cells = json::array();
  for (const auto& c : d.cells) {
    cells.push_back({{"k", c.k}, {"j", c.j}, {"A", c.a_set}, {"B", c.b_set}, {"theta", c.theta}, {"T", c.t}});
  }
  out["cells"] = std::move(cells);
  out["maximal"] = detail::double_array(d.maximal.values());
  out["checks"] = to_json(d.checks);
  return out;
}

inline json to_json(const oracle_result& r) {
  json out;
  out["passed"] = r.passed();
  out["stopping_times"] = r.stopping_times;
  out["recursion_count"] = r.recursion_count;
  out["subsets"] = r.subsets;
  json cs = json::array();
  for (const auto& c : r.comparisons) {
    cs.push_back({{"condition", c.condition},
                  {"subsets", to_json(c.by_subsets)},
                  {"stopping_times", to_json(c.by_stopping_times)},
                  {"values_agree", c.values_agree},
                  {"witnesses_agree", c.witnesses_agree}});
  }
  out["comparisons"] = std::move(cs);
  return out;
}

inline json to_json(const search_result& r) {
  json out;
  out["objective"] = std::string(to_string(r.objective));
  out["best_value"] = r.best_value;
  out["seed"] = r.seed;
  out["budget"] = r.budget;
  out["restart"] = r.restart;
  json trace = json::array();
  for (const auto& [it, v] : r.trace) trace.push_back({it, v});
  out["trace"] = std::move(trace);
  out["best_instance"] = to_json(r.best_instance);
  return out;
}

inline json to_json(const probe_report& r) {
  json out;
  out["evaluated"] = r.evaluated;
  out["inconsistent"] = r.inconsistent;
  out["apvec_above_c1"] = r.apvec_above_c1;
  json ranked = json::array();
  for (const auto& e : r.ranked) {
    json row = {{"index", e.index}, {"seed", e.seed}, {"Apvec", e.apvec}, {"C1", e.c1},    {"RH", e.rh},
                {"gap", e.gap},     {"apvec_above_c1", e.apvec_above_c1}, {"consistent", e.consistent}};
    if (e.verifier_rejects) row["verifier_rejects"] = *e.verifier_rejects;
    row["instance"] = to_json(e.inst);
    ranked.push_back(std::move(row));
  }
  out["ranked"] = std::move(ranked);
  return out;
}

}  // namespace marweight

#endif
