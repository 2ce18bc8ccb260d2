#include "metaestim/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <variant>

#include "json.hpp"

#include "metaestim/comparison.hpp"
#include "metaestim/csv.hpp"
#include "metaestim/dynamics.hpp"

namespace metaestim::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kTunePeriodTolerance = 0.01;
constexpr std::size_t kTunePeriodBudget = 2000;

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson options_json(const AlgorithmOptions& options) {
  return std::visit(
      [](const auto& o) -> ojson {
        using T = std::decay_t<decltype(o)>;
        ojson j;
        if constexpr (std::is_same_v<T, OptionsPSO>) {
          j["iterations"] = o.iterations;
          j["swarm_size"] = o.swarm_size;
          j["phi1"] = o.phi1;
          j["phi2"] = o.phi2;
          j["chi"] = o.chi;
          j["neighborhood"] = o.neighborhood.name;
        } else if constexpr (std::is_same_v<T, OptionsSAA>) {
          j["t0"] = o.t0;
          j["t_min"] = o.t_min;
          j["alpha"] = o.alpha;
          j["temperature_length"] = o.temperature_length;
          j["distance"] = o.distance;
          j["neighborhood"] = to_string(o.neighborhood);
        } else if constexpr (std::is_same_v<T, OptionsACOR>) {
          j["archive_size"] = o.archive_size;
          j["ants"] = o.ants;
          j["q"] = o.q;
          j["xi"] = o.xi;
          j["iterations"] = o.iterations;
        } else if constexpr (std::is_same_v<T, OptionsEES1>) {
          j["solution_size"] = o.solution_size;
          j["mu"] = o.mu;
          j["rho"] = o.rho;
          j["kappa"] = o.kappa;
          j["iterations"] = o.iterations;
          j["mutation_scale"] = o.mutation_scale;
          j["pseudocode_recombination"] = o.pseudocode_recombination;
        } else {
          j["population"] = o.population;
          j["rho"] = o.rho;
          j["iterations"] = o.iterations;
          j["r"] = o.r;
        }
        return j;
      },
      options);
}

ojson stats_json(const Estimates& est, std::uint64_t seed, double tolerance, const AlgorithmOptions& options,
                 bool timing) {
  ojson j;
  j["method"] = est.method;
  j["seed"] = seed;
  j["total_evals"] = est.stats.total_evals;
  j["converged"] = est.stats.converged;
  j["achieved_tolerance"] = number_or_null(est.stats.achieved_tolerance);
  j["tolerance"] = tolerance;
  j["wall_time"] = timing ? ojson(est.stats.wall_time) : ojson(nullptr);
  j["failures"] = est.failures.size();
  j["options"] = options_json(options);
  return j;
}

void write_json(const fs::path& p, const ojson& j) {
  auto out = open_out(p);
  out << j.dump(2) << '\n';
}

// Runs body, mapping exceptions to exit statuses.
template <class Fn>
int guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const ProblemError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const SetupError& e) {
    err << "error: objective setup failed: " << e.what() << '\n';
    return kExitSetup;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

void report(std::ostream& err, const Estimates& est) {
  err << est.method << ": " << est.stats.total_evals << " evaluations, best fitness "
      << csv::format_double(est.best.fitness) << (est.stats.converged ? " (converged)" : " (not converged)")
      << ", wall time " << est.stats.wall_time << " s";
  if (!est.failures.empty()) err << ", " << est.failures.size() << " failed evaluations";
  err << '\n';
}

void prepare_dir(const fs::path& dir) {
  if (dir.empty()) throw ProblemError("--out is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

void Surface::write_csv(std::ostream& os) const {
  os << x_name << ',' << y_name << ",fitness\n";
  for (std::size_t ix = 0; ix < grid; ++ix)
    for (std::size_t iy = 0; iy < grid; ++iy) {
      os << csv::format_double(x_centers[ix]) << ',' << csv::format_double(y_centers[iy]) << ',';
      if (const auto& c = cells[ix * grid + iy]) os << csv::format_double(*c);
      os << '\n';
    }
}

Surface bin_surface(const ParameterSpace& space, std::span<const Candidate> visited, std::size_t i, std::size_t j,
                    std::size_t grid) {
  if (grid < 1) throw std::invalid_argument("grid must be >= 1");
  if (i >= space.dimension() || j >= space.dimension()) throw std::out_of_range("bin_surface: parameter index");
  Surface s;
  s.x_name = space[i].name;
  s.y_name = space[j].name;
  s.grid = grid;
  s.cells.assign(grid * grid, std::nullopt);
  auto centers = [grid](const ParameterDef& p) {
    std::vector<double> c(grid);
    const double w = (p.max - p.min) / static_cast<double>(grid);
    for (std::size_t k = 0; k < grid; ++k) c[k] = p.min + (static_cast<double>(k) + 0.5) * w;
    return c;
  };
  s.x_centers = centers(space[i]);
  s.y_centers = centers(space[j]);
  auto cell = [grid](const ParameterDef& p, double v) {
    const double u = (v - p.min) / (p.max - p.min) * static_cast<double>(grid);
    if (!(u >= 0.0)) return std::size_t{0};
    return std::min(grid - 1, static_cast<std::size_t>(u));
  };
  for (const auto& c : visited) {
    if (!c.evaluated()) continue;
    auto& slot = s.cells[cell(space[i], c.values[i]) * grid + cell(space[j], c.values[j])];
    if (!slot || c.fitness < *slot) slot = c.fitness;
  }
  return s;
}

std::vector<std::pair<std::size_t, std::size_t>> surface_pairs(std::size_t dimension) {
  if (dimension < 2) return {};
  if (dimension == 2) return {{0, 1}};
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < dimension; ++i) out.emplace_back(i, (i + 1) % dimension);
  return out;
}

void write_run_outputs(const fs::path& dir, const ParameterSpace& space, const Estimates& est, std::uint64_t seed,
                       double tolerance, const AlgorithmOptions& options, bool timing) {
  {
    auto out = open_out(dir / "best.csv");
    csv::write_best(out, space, est.best);
  }
  {
    auto out = open_out(dir / "iteration_bests.csv");
    csv::write_candidates(out, space, est.iteration_bests);
  }
  {
    auto out = open_out(dir / "visited_space.csv");
    csv::write_candidates(out, space, est.visited_space);
  }
  write_json(dir / "stats.json", stats_json(est, seed, tolerance, options, timing));
  const fs::path log = dir / "run.log";
  if (!est.failures.empty()) {
    auto out = open_out(log);
    for (const auto& f : est.failures) out << "pset " << f.pset << ": " << f.message << '\n';
  } else {
    std::error_code ec;
    fs::remove(log, ec);
  }
}

int cmd_extremize(const fs::path& problem_path, const RunSettings& settings, std::ostream& err) {
  return guarded(err, [&] {
    const Problem pb = load_problem(problem_path);
    const Method method = pb.method.value_or(Method::pso);
    const AlgorithmOptions options = resolve_options(method, pb.options);
    const std::uint64_t seed = settings.seed.value_or(pb.seed);
    prepare_dir(settings.out_dir);
    Objective obj = build_objective(pb, settings.jobs);
    if (pb.budget) obj.set_evaluation_budget(*pb.budget);
    const Estimates est = extremize(method, obj, options, seed);
    write_run_outputs(settings.out_dir, pb.space, est, seed, obj.tolerance(), options, settings.timing);
    report(err, est);
    return kExitOk;
  });
}

int cmd_benchmark(std::size_t replicates, double tolerance, std::uint64_t seed, const fs::path& out, unsigned jobs,
                  std::ostream& err) {
  return guarded(err, [&] {
    if (replicates < 1) throw ProblemError("--replicates must be >= 1");
    if (!(tolerance >= 0.0)) throw ProblemError("--tolerance must be >= 0");
    if (out.empty()) throw ProblemError("--out is required");
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    const ComparisonReport report = compare_algorithms(standard_benchmark_functions(), standard_benchmark_methods(),
                                                       replicates, tolerance, seed, jobs);
    auto os = open_out(out);
    report.write_csv(os);
    return kExitOk;
  });
}

int cmd_explore(const fs::path& problem_path, std::size_t budget, std::size_t grid, const RunSettings& settings,
                std::ostream& err) {
  return guarded(err, [&] {
    const Problem pb = load_problem(problem_path);
    if (budget < 10 * pb.space.dimension())
      throw ProblemError("--budget must be at least 10 x dimension (" + std::to_string(10 * pb.space.dimension()) +
                         ")");
    if (grid < 1) throw ProblemError("--grid must be >= 1");
    const Method method = pb.method.value_or(Method::ees2);
    const AlgorithmOptions options = resolve_options(method, pb.options);
    const std::uint64_t seed = settings.seed.value_or(pb.seed);
    prepare_dir(settings.out_dir);
    Objective obj = build_objective(pb, settings.jobs);
    // a fixed-budget map: reaching the tolerance must not end the run early
    obj.set_tolerance(0.0);
    obj.set_evaluation_budget(budget);
    const Estimates est = extremize(method, obj, options, seed);
    write_run_outputs(settings.out_dir, pb.space, est, seed, obj.tolerance(), options, settings.timing);
    for (const auto& [i, j] : surface_pairs(pb.space.dimension())) {
      const Surface s = bin_surface(pb.space, est.visited_space, i, j, grid);
      auto out = open_out(settings.out_dir / ("surface_" + s.x_name + "_" + s.y_name + ".csv"));
      s.write_csv(out);
    }
    report(err, est);
    return kExitOk;
  });
}

int cmd_tune_period(double target, const std::string& method_key, const RunSettings& settings,
                    std::optional<std::size_t> budget, std::optional<double> tolerance, std::ostream& err) {
  return guarded(err, [&] {
    if (!(target > 0.0)) throw ProblemError("--target must be > 0");
    Method method;
    try {
      method = parse_method(method_key);
    } catch (const std::invalid_argument& e) {
      throw ProblemError(e.what());
    }
    Problem pb;
    pb.kind = ObjectiveKind::period;
    pb.period_target = target;
    pb.space = period_space();
    pb.tolerance = tolerance.value_or(kTunePeriodTolerance);
    if (!(pb.tolerance >= 0.0)) throw ProblemError("--tolerance must be >= 0");
    const AlgorithmOptions options = default_options(method);
    const std::uint64_t seed = settings.seed.value_or(kDefaultSeed);
    prepare_dir(settings.out_dir);

    Objective obj = build_objective(pb);
    obj.set_evaluation_budget(budget.value_or(kTunePeriodBudget));
    const Estimates est = extremize(method, obj, options, seed);
    write_run_outputs(settings.out_dir, pb.space, est, seed, obj.tolerance(), options, settings.timing);

    const auto& v = est.best.values;
    const PredatorPreySetup setup = default_period_setup(target);
    const TimeSeries series = integrate_predator_prey({v[0], v[1], v[2], v[3]}, setup);
    {
      auto out = open_out(settings.out_dir / "series.csv");
      csv::write_time_series(out, series);
    }
    const auto period = naiveperiod(series.channel("y"), series.t());
    err << "target " << target << ", y period " << (period ? csv::format_double(*period) : std::string("none"))
        << '\n';
    report(err, est);
    return kExitOk;
  });
}

}  // namespace metaestim::cli
