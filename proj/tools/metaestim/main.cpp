#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "metaestim/cli/commands.hpp"

namespace mc = metaestim::cli;

int main(int argc, char** argv) {
  CLI::App app{"metaestim: derivative-free parameter estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "metaestim 0.1.0");

  std::string problem;
  std::string out;
  std::uint64_t seed = metaestim::kDefaultSeed;
  unsigned jobs = 1;
  bool timing = false;

  auto* ext = app.add_subcommand("extremize", "run one optimization described by a problem file");
  ext->add_option("problem", problem, "problem file (key = value or JSON)")->required();
  ext->add_option("--out", out, "output directory")->required();
  auto* ext_seed = ext->add_option("--seed", seed, "random seed (overrides the problem file)");
  ext->add_option("--jobs", jobs, "concurrent external model runs")->check(CLI::PositiveNumber);
  ext->add_flag("--timing", timing, "record wall time in stats.json");

  std::size_t replicates = 7;
  double tolerance = metaestim::kDefaultTolerance;
  auto* bench = app.add_subcommand("benchmark", "compare saa, pso, acor and ees1 on four 4-D test functions");
  bench->add_option("--replicates", replicates, "runs per cell")->check(CLI::PositiveNumber);
  bench->add_option("--tolerance", tolerance, "convergence tolerance");
  bench->add_option("--seed", seed, "seed of the first replicate");
  bench->add_option("--out", out, "report CSV")->required();
  bench->add_option("--jobs", jobs, "worker threads (0 = all cores)");

  std::size_t budget = 0;
  std::size_t grid = 20;
  auto* explore = app.add_subcommand("explore", "map the solution space with a fixed evaluation budget");
  explore->add_option("problem", problem, "problem file")->required();
  explore->add_option("--budget", budget, "evaluation budget")->required();
  explore->add_option("--grid", grid, "cells per axis of each surface")->check(CLI::PositiveNumber);
  explore->add_option("--out", out, "output directory")->required();
  auto* explore_seed = explore->add_option("--seed", seed, "random seed (overrides the problem file)");
  explore->add_option("--jobs", jobs, "concurrent external model runs")->check(CLI::PositiveNumber);
  explore->add_flag("--timing", timing, "record wall time in stats.json");

  double target = 72.0;
  std::string method = "pso";
  std::size_t tune_budget = 0;
  double tune_tolerance = 0.0;
  auto* tune = app.add_subcommand("tune-period", "tune the predator-prey model to oscillate with a given period");
  tune->add_option("--target", target, "target period")->required();
  tune->add_option("--method", method, "pso, saa, acor, ees1 or ees2");
  tune->add_option("--out", out, "output directory")->required();
  tune->add_option("--seed", seed, "random seed");
  auto* tune_budget_opt = tune->add_option("--budget", tune_budget, "evaluation budget (default 2000)");
  auto* tune_tol_opt = tune->add_option("--tolerance", tune_tolerance, "cost tolerance (default 0.01)");
  tune->add_flag("--timing", timing, "record wall time in stats.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mc::kExitInvalid;
  }

  mc::RunSettings settings;
  settings.out_dir = out;
  settings.jobs = jobs;
  settings.timing = timing;

  if (ext->parsed()) {
    if (*ext_seed) settings.seed = seed;
    return mc::cmd_extremize(problem, settings, std::cerr);
  }
  if (bench->parsed()) return mc::cmd_benchmark(replicates, tolerance, seed, out, jobs, std::cerr);
  if (explore->parsed()) {
    if (*explore_seed) settings.seed = seed;
    return mc::cmd_explore(problem, budget, grid, settings, std::cerr);
  }
  settings.seed = seed;
  return mc::cmd_tune_period(target, method, settings,
                             *tune_budget_opt ? std::optional<std::size_t>(tune_budget) : std::nullopt,
                             *tune_tol_opt ? std::optional<double>(tune_tolerance) : std::nullopt, std::cerr);
}
