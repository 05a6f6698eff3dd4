// Command implementations behind tools/marweight. Argument parsing lives in the tool itself.
#ifndef MARWEIGHT_CLI_HPP
#define MARWEIGHT_CLI_HPP

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "marweight/conditions.hpp"
#include "marweight/error.hpp"
#include "marweight/instance.hpp"
#include "marweight/json_io.hpp"
#include "marweight/oracle.hpp"
#include "marweight/sawyer.hpp"
#include "marweight/search.hpp"
#include "marweight/theorem_lab.hpp"

namespace marweight::cli {

enum exit_code : int { ok = 0, verification_failed = 1, bad_input = 2, cap_exceeded = 3 };

struct run_config {
  std::string command;
  std::optional<std::string> instance_path;
  std::string suite = "weak";
  std::size_t trials = 32;
  std::optional<std::uint64_t> seed;
  std::size_t budget = 100;
  search_mode mode = search_mode::exact;
  std::optional<double> p1, p2;
  std::optional<std::string> out;
  std::string format = "json";
  std::string objective;
  bool probe = false;
  /// Depth of generated instances when no --instance is given.
  std::size_t depth = 2;
  /// Test hook: scales the final constant of the strong chain.
  double corrupt_constant = 1.0;
  /// Overrides the subset and oracle caps; normally taken from MARWEIGHT_CAP.
  std::optional<std::size_t> cap;
};

/// Reads MARWEIGHT_CAP; absent means no override.
inline std::optional<std::size_t> cap_from_environment() {
  const char* raw = std::getenv("MARWEIGHT_CAP");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const auto value = std::strtoull(raw, &end, 10);
  detail::require(*end == '\0' && value > 0, errc::bad_spec, std::string("MARWEIGHT_CAP is not a positive integer: ") + raw);
  return static_cast<std::size_t>(value);
}

namespace detail {

inline instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  marweight::detail::require(static_cast<bool>(in), errc::parse_error, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_instance(text.str());
}

inline void apply_exponents(instance& inst, const run_config& cfg) {
  if (cfg.p1 || cfg.p2) inst.exps = exponent_config(cfg.p1.value_or(inst.exps.p1()), cfg.p2.value_or(inst.exps.p2()));
}

inline std::uint64_t require_seed(const run_config& cfg) {
  marweight::detail::require(cfg.seed.has_value(), errc::bad_spec, cfg.command + " needs --seed");
  return *cfg.seed;
}

inline condition_options conditions_of(const run_config& cfg) {
  condition_options c;
  c.mode = cfg.mode;
  if (cfg.cap) c.cap = *cfg.cap;
  if (cfg.mode == search_mode::sampled) {
    c.seed = require_seed(cfg);
    c.budget = std::max<std::size_t>(cfg.budget, 1);
  }
  return c;
}

/// Writes to `path.tmp` and renames, so a failed run never leaves a partial file behind.
inline void emit(const run_config& cfg, const std::string& content, std::ostream& stdout_stream) {
  if (!cfg.out) {
    stdout_stream << content;
    return;
  }
  const std::filesystem::path target(*cfg.out);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    marweight::detail::require(static_cast<bool>(f), errc::parse_error, "cannot write " + tmp.string());
    f << content;
    f.close();
    marweight::detail::require(!f.fail(), errc::parse_error, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::string csv_number(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

}  // namespace detail

inline int cmd_check(const run_config& cfg, std::ostream& out) {
  marweight::detail::require(cfg.instance_path.has_value(), errc::bad_spec, "check needs --instance");
  auto inst = detail::load_instance(*cfg.instance_path);
  detail::apply_exponents(inst, cfg);
  const auto conditions = detail::conditions_of(cfg);
  const auto a = a_vec_p_constant(inst.tree, inst.v, inst.w1, inst.w2, inst.exps);
  const auto rh = rh_constant(inst.tree, inst.w1, inst.w2, inst.exps, conditions);
  const auto s = s_vec_p_constant(inst.tree, inst.v, inst.w1, inst.w2, inst.exps, conditions);
  const auto ap = a_p_constant(inst.tree, inst.v, inst.w1, inst.exps.p1());
  if (cfg.format == "csv") {
    std::string text = "constant,value,exact\n";
    for (const auto* c : {&a, &rh, &s, &ap}) text += c->condition + "," + detail::csv_number(c->value) + "," + (c->exact ? "1" : "0") + "\n";
    detail::emit(cfg, text, out);
    return ok;
  }
  json j;
  j["Apvec"] = a.value;
  j["RH"] = rh.value;
  j["Spvec"] = s.value;
  j["Ap"] = ap.value;
  j["details"] = {{"Apvec", to_json(a)}, {"RH", to_json(rh)}, {"Spvec", to_json(s)}, {"Ap", to_json(ap)}};
  detail::emit(cfg, detail::dump(j), out);
  return ok;
}

inline int cmd_verify(const run_config& cfg, std::ostream& out, std::ostream& err) {
  const auto seed = detail::require_seed(cfg);
  marweight::detail::require(cfg.trials >= 1, errc::bad_spec, "--trials must be at least 1");
  const std::string& suite = cfg.suite;
  marweight::detail::require(suite == "weak" || suite == "strong" || suite == "oneweight" || suite == "convergence" ||
                                 suite == "decomposition",
                             errc::bad_spec, "unknown suite '" + suite + "'");
  std::optional<instance> loaded;
  if (cfg.instance_path) {
    loaded = detail::load_instance(*cfg.instance_path);
  } else {
    generator_config gen;
    gen.depth = cfg.depth;
    gen.coupled_v = suite == "convergence";
    gen.p1 = cfg.p1.value_or(2);
    gen.p2 = cfg.p2.value_or(2);
    loaded = random_instance(gen, seed);
  }
  auto& inst = *loaded;
  detail::apply_exponents(inst, cfg);

  lab_options lab;
  lab.trials = cfg.trials;
  lab.seed = seed;
  lab.conditions = detail::conditions_of(cfg);
  lab.constant_scale = cfg.corrupt_constant;
  // Exact mode refuses trees above the cap; the suites would otherwise fail deep inside.
  if (cfg.mode == search_mode::exact && (suite == "weak" || suite == "strong") && inst.leaf_count() > lab.conditions.cap) {
    marweight::detail::fail(errc::cap_exceeded, std::to_string(inst.leaf_count()) + " leaves exceed the exact-mode cap of " +
                                                    std::to_string(lab.conditions.cap));
  }

  proof_chain_report rep;
  json extra;
  if (suite == "weak") {
    rep = verify_weak_equivalences(inst.tree, inst.v, inst.w1, inst.w2, inst.exps, lab);
  } else if (suite == "strong") {
    rep = verify_strong_chain(inst.tree, inst.v, inst.w1, inst.w2, inst.exps, lab);
  } else if (suite == "oneweight") {
    rep = one_weight_suite(inst.tree, inst.w1, inst.exps.p1(), lab);
  } else if (suite == "convergence") {
    rep = verify_convergence(inst.tree, inst.v, inst.exps, lab);
  } else {
    rep = verify_decomposition(inst.tree, inst.v, inst.w1, inst.w2, inst.exps, lab);
    const auto n = inst.leaf_count();
    const auto f = inst.f.value_or(simple_function::constant(n, 1.0));
    const auto g = inst.g.value_or(simple_function::constant(n, 1.0));
    const auto dec = sawyer_decomposition_of(inst.tree, f, g, dual_weight(inst.w1, inst.exps.p1()),
                                             dual_weight(inst.w2, inst.exps.p2()), inst.exps, inst.v);
    rep.merge(dec.checks);
    extra = to_json(dec);
  }

  const bool passed = rep.passed();
  std::string failing;
  for (const auto& s : rep.steps()) {
    if (!s.pass) {
      failing = s.step;
      break;
    }
  }
  if (cfg.format == "csv") {
    std::ostringstream text;
    rep.write_csv(text);
    detail::emit(cfg, text.str(), out);
  } else {
    json j;
    j["suite"] = suite;
    j["seed"] = seed;
    j["trials"] = cfg.trials;
    j["passed"] = passed;
    if (!passed) j["failing_step"] = failing;
    j["report"] = to_json(rep);
    if (!extra.is_null()) j["decomposition"] = std::move(extra);
    j["instance"] = to_json(inst);
    detail::emit(cfg, detail::dump(j), out);
  }
  if (!passed) {
    err << "verification failed at step " << failing << "\n";
    return verification_failed;
  }
  return ok;
}

inline int cmd_oracle(const run_config& cfg, std::ostream& out) {
  marweight::detail::require(cfg.instance_path.has_value(), errc::bad_spec, "oracle needs --instance");
  auto inst = detail::load_instance(*cfg.instance_path);
  detail::apply_exponents(inst, cfg);
  const auto res = stopping_time_oracle(inst.tree, inst.v, inst.w1, inst.w2, inst.exps, cfg.cap.value_or(default_oracle_cap));
  if (cfg.format == "csv") {
    std::string text = "condition,subsets,stopping_times,values_agree,witnesses_agree\n";
    for (const auto& c : res.comparisons) {
      text += c.condition + "," + detail::csv_number(c.by_subsets.value) + "," + detail::csv_number(c.by_stopping_times.value) +
              "," + (c.values_agree ? "1" : "0") + "," + (c.witnesses_agree ? "1" : "0") + "\n";
    }
    detail::emit(cfg, text, out);
  } else {
    detail::emit(cfg, detail::dump(to_json(res)), out);
  }
  return res.passed() ? ok : verification_failed;
}

inline int cmd_search(const run_config& cfg, std::ostream& out) {
  const auto seed = detail::require_seed(cfg);
  search_options opts;
  opts.conditions = detail::conditions_of(cfg);
  opts.conditions.mode = search_mode::exact;
  opts.conditions.seed = seed;
  if (cfg.probe) {
    generator_config gen;
    gen.depth = cfg.depth;
    gen.p1 = cfg.p1.value_or(2);
    gen.p2 = cfg.p2.value_or(2);
    const auto rep = necessity_probe(cfg.budget, seed, gen, 25, opts.conditions);
    if (cfg.format == "csv") {
      std::string text = "index,Apvec,C1,RH,gap,consistent\n";
      for (const auto& e : rep.ranked) {
        text += std::to_string(e.index) + "," + detail::csv_number(e.apvec) + "," + detail::csv_number(e.c1) + "," +
                detail::csv_number(e.rh) + "," + detail::csv_number(e.gap) + "," + (e.consistent ? "1" : "0") + "\n";
      }
      detail::emit(cfg, text, out);
    } else {
      detail::emit(cfg, detail::dump(to_json(rep)), out);
    }
    return rep.inconsistent == 0 ? ok : verification_failed;
  }
  const auto kind = parse_objective(cfg.objective);
  std::optional<instance> start;
  if (cfg.instance_path) {
    start = detail::load_instance(*cfg.instance_path);
  } else {
    generator_config gen;
    gen.depth = cfg.depth;
    gen.p1 = cfg.p1.value_or(2);
    gen.p2 = cfg.p2.value_or(2);
    start = random_instance(gen, seed);
  }
  detail::apply_exponents(*start, cfg);
  const auto res = hill_climb(kind, *start, cfg.budget, seed, opts);
  if (cfg.format == "csv") {
    std::string text = "iteration,value\n";
    for (const auto& [it, v] : res.trace) text += std::to_string(it) + "," + detail::csv_number(v) + "\n";
    detail::emit(cfg, text, out);
  } else {
    detail::emit(cfg, detail::dump(to_json(res)), out);
  }
  return ok;
}

/// Maps library errors onto the exit-code contract: CapExceeded and TooManyStoppingTimes give 3,
/// everything else 2. The message goes to `err`.
inline int run(run_config cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    if (!cfg.cap) cfg.cap = cap_from_environment();
    if (cfg.format != "json" && cfg.format != "csv") marweight::detail::fail(errc::bad_spec, "--format must be json or csv");
    if (cfg.command == "check") return cmd_check(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    if (cfg.command == "oracle") return cmd_oracle(cfg, out);
    if (cfg.command == "search") return cmd_search(cfg, out);
    marweight::detail::fail(errc::bad_spec, "unknown command '" + cfg.command + "'");
  } catch (const error& e) {
    err << e.what() << "\n";
    return e.code() == errc::cap_exceeded || e.code() == errc::too_many_stopping_times ? cap_exceeded : bad_input;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return bad_input;
  }
}

}  // namespace marweight::cli

#endif
