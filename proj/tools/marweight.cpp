#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "marweight/cli.hpp"

int main(int argc, char** argv) {
  using marweight::cli::run_config;
  CLI::App app{"Two-weight bilinear martingale maximal inequalities on finite filtrations"};
  app.require_subcommand(1);
  run_config cfg;
  std::string mode = "exact";
  std::string p1, p2;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--instance", cfg.instance_path, "instance bundle (JSON)");
    sub->add_option("--mode", mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
    sub->add_option("--p1", p1, "override p1 (number or p/q)");
    sub->add_option("--p2", p2, "override p2 (number or p/q)");
    sub->add_option("--out", cfg.out, "output path; stdout when omitted");
    sub->add_option("--format", cfg.format, "json or csv");
    sub->add_option("--seed", cfg.seed, "seed (required for anything that samples)");
    sub->add_option("--budget", cfg.budget, "sample budget or search iterations");
  };

  auto* check = app.add_subcommand("check", "weight-condition constants of an instance");
  common(check);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  common(verify);
  verify->add_option("--suite", cfg.suite, "weak|strong|oneweight|convergence|decomposition");
  verify->add_option("--trials", cfg.trials, "random pairs per suite");
  verify->add_option("--depth", cfg.depth, "depth of the generated instance when --instance is absent");
  verify->add_option("--corrupt-constant", cfg.corrupt_constant, "scale the strong-chain constant (test hook)");

  auto* oracle = app.add_subcommand("oracle", "stopping-time vs subset suprema, with enumeration counts");
  common(oracle);

  auto* search = app.add_subcommand("search", "hill-climb an objective or run the necessity probe");
  common(search);
  search->add_option("--objective", cfg.objective, "weak_over_apvec|apvec_over_stopped_times_rh|strong_over_spvec_rh|rh_violation_probe");
  search->add_option("--depth", cfg.depth, "depth of the generated start instance");
  search->add_flag("--probe", cfg.probe, "rank random instances by the A-vector/stopped-time gap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : marweight::cli::bad_input;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.mode = mode == "sampled" ? marweight::search_mode::sampled : marweight::search_mode::exact;
  try {
    if (!p1.empty()) cfg.p1 = marweight::to_double(marweight::parse_rational(p1));
    if (!p2.empty()) cfg.p2 = marweight::to_double(marweight::parse_rational(p2));
  } catch (const marweight::error& e) {
    std::cerr << e.what() << "\n";
    return marweight::cli::bad_input;
  }
  return marweight::cli::run(cfg);
}
