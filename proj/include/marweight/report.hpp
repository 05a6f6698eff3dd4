#ifndef MARWEIGHT_REPORT_HPP
#define MARWEIGHT_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "marweight/rational.hpp"
#include "marweight/simple_function.hpp"

namespace marweight {

/// One asserted inequality lhs <= constant * rhs. After merging, the record holds the worst instance
/// seen for its step name together with how many checks ran and failed.
struct step_record {
  std::string step;
  double lhs = 0;
  double rhs = 0;
  double constant = 1;
  bool pass = true;
  std::size_t checks = 0;
  std::size_t failures = 0;
};

/// Relative excess of lhs over constant * rhs; positive means the inequality is violated.
inline double step_excess(double lhs, double rhs, double constant) {
  const double bound = constant * rhs;
  if (lhs == bound) return 0;
  if (!std::isfinite(lhs) || !std::isfinite(bound)) return lhs > bound ? std::numeric_limits<double>::infinity() : -1;
  return (lhs - bound) / std::max({std::fabs(lhs), std::fabs(bound), 1e-300});
}

struct trial_record {
  std::size_t trial = 0;
  std::vector<std::pair<std::string, double>> values;

  void set(const std::string& key, double value) {
    for (auto& [k, v] : values) {
      if (k == key) {
        v = value;
        return;
      }
    }
    values.emplace_back(key, value);
  }
};

/// Data that made a step fail, kept so a caller can serialize a replayable instance.
struct failure_witness {
  std::string step;
  std::size_t trial = 0;
  simple_function f, g;
};

class proof_chain_report {
 public:
  /// Records lhs <= constant * rhs (relative 1e-9, absolute floor 1e-12).
  bool check(const std::string& step, double lhs, double rhs, double constant = 1.0) {
    const bool ok = leq_tol(lhs, constant * rhs);
    absorb({step, lhs, rhs, constant, ok, 1, ok ? 0u : 1u});
    return ok;
  }

  /// Records an exact assertion; lhs is the number of violations found.
  bool check_exact(const std::string& step, std::size_t violations) {
    const bool ok = violations == 0;
    absorb({step, static_cast<double>(violations), 0, 1, ok, 1, ok ? 0u : 1u});
    return ok;
  }

  void merge(const proof_chain_report& other) {
    for (const auto& s : other.steps_) absorb(s);
    trials_.insert(trials_.end(), other.trials_.begin(), other.trials_.end());
    for (const auto& [k, v] : other.constants_)
      if (!constant(k)) constants_.emplace_back(k, v);
    if (!failure_ && other.failure_) failure_ = other.failure_;
  }

  void add_trial(trial_record record) { trials_.push_back(std::move(record)); }

  /// Derived constants the checks were run against (Apvec, RH, c_w, ...).
  void set_constant(const std::string& key, double value) {
    for (auto& [k, v] : constants_) {
      if (k == key) {
        v = value;
        return;
      }
    }
    constants_.emplace_back(key, value);
  }

  std::optional<double> constant(const std::string& key) const {
    for (const auto& [k, v] : constants_)
      if (k == key) return v;
    return std::nullopt;
  }

  const std::vector<std::pair<std::string, double>>& constants() const { return constants_; }

  void note_failure(failure_witness witness) {
    if (!failure_) failure_ = std::move(witness);
  }

  bool passed() const {
    return std::all_of(steps_.begin(), steps_.end(), [](const step_record& s) { return s.failures == 0; });
  }

  /// Largest relative excess over all steps (negative when everything holds with room to spare).
  double margin() const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& s : steps_) worst = std::max(worst, step_excess(s.lhs, s.rhs, s.constant));
    return steps_.empty() ? 0.0 : worst;
  }

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& s : steps_) n += s.failures;
    return n;
  }

  const step_record* find(const std::string& step) const {
    for (const auto& s : steps_)
      if (s.step == step) return &s;
    return nullptr;
  }

  const std::vector<step_record>& steps() const { return steps_; }
  const std::vector<trial_record>& trials() const { return trials_; }
  const std::optional<failure_witness>& failure() const { return failure_; }

  /// Trial-level values as CSV; columns are the union of keys in order of first appearance.
  void write_csv(std::ostream& out) const {
    std::vector<std::string> columns;
    for (const auto& t : trials_)
      for (const auto& [k, v] : t.values)
        if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    out << "trial";
    for (const auto& c : columns) out << ',' << c;
    out << '\n';
    const auto old_precision = out.precision(17);
    for (const auto& t : trials_) {
      out << t.trial;
      for (const auto& c : columns) {
        out << ',';
        for (const auto& [k, v] : t.values)
          if (k == c) out << v;
      }
      out << '\n';
    }
    out.precision(old_precision);
  }

 private:
  void absorb(const step_record& incoming) {
    auto it = std::find_if(steps_.begin(), steps_.end(), [&](const step_record& s) { return s.step == incoming.step; });
    if (it == steps_.end()) {
      steps_.push_back(incoming);
      return;
    }
    const std::size_t checks = it->checks + incoming.checks;
    const std::size_t failures = it->failures + incoming.failures;
    if (step_excess(incoming.lhs, incoming.rhs, incoming.constant) > step_excess(it->lhs, it->rhs, it->constant)) {
      *it = incoming;
    }
    it->checks = checks;
    it->failures = failures;
    it->pass = failures == 0;
  }

  std::vector<step_record> steps_;
  std::vector<trial_record> trials_;
  std::vector<std::pair<std::string, double>> constants_;
  std::optional<failure_witness> failure_;
};

}  // namespace marweight

#endif
