// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"

#include "metaestim/cli/commands.hpp"
#include "metaestim/comparison.hpp"
#include "metaestim/csv.hpp"
#include "metaestim/dynamics.hpp"
#include "metaestim/extmodel.hpp"
#include "metaestim/extremize.hpp"
#include "metaestim/saa.hpp"
#include "metaestim/sampling.hpp"
#include "metaestim/subprocess.hpp"
#include "metaestim/test_functions.hpp"

namespace fs = std::filesystem;
using namespace metaestim;

namespace {

// ---- pinned thresholds ----------------------------------------------------
constexpr std::size_t kSeeds = 7;

constexpr double kC1Tolerance = 2e-5;
constexpr double kC1MaxMedianEvals = 6000;
constexpr double kC1MaxCoordError = 0.05;
constexpr double kC1MaxSeconds = 10;

constexpr std::size_t kC2Replicates = 7;
constexpr double kC2Tolerance = 0.1;
constexpr double kC2MinRate = 6.0 / 7.0;
constexpr double kC2MaxConvergedFitness = 0.1;
constexpr double kC2MaxSeconds = 180;

constexpr double kC3Target = 72;
constexpr double kC3MaxCost = 0.05;
constexpr double kC3MaxPeriodError = 0.05;  // relative
constexpr std::size_t kC3MaxEvals = 2000;
constexpr double kC3MaxSeconds = 180;

constexpr std::size_t kC4Instances = 200;
constexpr double kC4MaxSeconds = 5;

constexpr std::size_t kC5Trials = 100000;
constexpr double kC5MaxDeviation = 0.02;
constexpr double kC5MaxSeconds = 5;

constexpr std::size_t kC6MaxLength = 6;
constexpr double kC6MaxSeconds = 30;

constexpr double kC7RatioLow = 12;
constexpr double kC7RatioHigh = 20;

constexpr double kC8MinShrink = 10;

constexpr std::size_t kC10Budget = 300;
// ---------------------------------------------------------------------------

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

fs::path scratch_root() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / ("metaestim-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t data_rows(const fs::path& csv_file) {
  std::ifstream in(csv_file);
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++lines;
  return lines == 0 ? 0 : lines - 1;
}

ParameterSpace box(std::size_t d, double lo, double hi) {
  ParameterSpace s;
  for (std::size_t i = 1; i <= d; ++i) s.add({"x" + std::to_string(i), lo, hi});
  return s;
}

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (const double v : x) s += v * v;
  return s;
}

// 1. PSO on 2-D Rosenbrock.
Outcome rosenbrock_walkthrough() {
  std::vector<double> evals;
  double worst_coord = 0.0;
  std::size_t converged = 0;
  for (std::size_t s = 0; s < kSeeds; ++s) {
    const BenchmarkFunction f{TestFunction::rosenbrock, 2};
    Objective obj = make_benchmark_objective(f, kC1Tolerance);
    const Estimates est = extremize(Method::pso, obj, std::nullopt, kDefaultSeed + s);
    evals.push_back(est.stats.converged ? static_cast<double>(est.stats.total_evals)
                                        : std::numeric_limits<double>::infinity());
    if (est.stats.converged) {
      ++converged;
      for (const double v : est.best.values) worst_coord = std::max(worst_coord, std::fabs(v - 1.0));
    }
  }
  std::sort(evals.begin(), evals.end());
  const double median = evals[kSeeds / 2];
  const bool pass = median <= kC1MaxMedianEvals && converged > 0 && worst_coord <= kC1MaxCoordError;
  return {pass, "median evals " + fmt(median, 6) + " (<= " + fmt(kC1MaxMedianEvals) + "), converged " +
                    std::to_string(converged) + "/" + std::to_string(kSeeds) + ", max |best - 1| " +
                    fmt(worst_coord, 3) + " (<= " + fmt(kC1MaxCoordError) + ")"};
}

// 2. Shape of the benchmark report.
Outcome benchmark_report_shape() {
  const fs::path out = scratch_root() / "c2" / "report.csv";
  std::ostringstream log;
  const int status = cli::cmd_benchmark(kC2Replicates, kC2Tolerance, kDefaultSeed, out, 0, log);
  if (status != 0) return {false, "benchmark exited with " + std::to_string(status) + ": " + log.str()};

  struct Row {
    double evals, rate, fitness;
  };
  std::map<std::pair<std::string, std::string>, Row> rows;
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string s; std::getline(ls, s, ',');) f.push_back(s);
    if (f.size() != 5) return {false, "malformed report row: " + line};
    rows[{f[0], f[1]}] = {csv::parse_double(f[2]), csv::parse_double(f[3]), csv::parse_double(f[4])};
  }
  if (rows.size() != 16) return {false, "expected 16 rows, got " + std::to_string(rows.size())};

  std::vector<std::string> problems;
  for (const std::string fn : {"cigar", "schaffer", "griewank", "bohachevsky"}) {
    for (const std::string m : {"saa", "acor", "ees1"}) {
      const Row& r = rows[{fn, m}];
      if (r.rate < kC2MinRate - 1e-12)
        problems.push_back(m + "/" + fn + " convergence " + fmt(r.rate, 3) + " < 6/7");
    }
  }
  for (const std::string fn : {"cigar", "schaffer", "griewank"}) {
    const double e = rows[{fn, "ees1"}].evals;
    if (!(e < rows[{fn, "acor"}].evals)) problems.push_back("ees1/" + fn + " evals not below acor");
    if (!(e < rows[{fn, "pso"}].evals)) problems.push_back("ees1/" + fn + " evals not below pso");
  }
  for (const auto& [key, r] : rows)
    if (r.rate == 1.0 && r.fitness > kC2MaxConvergedFitness)
      problems.push_back(key.second + "/" + key.first + " converged mean fitness " + fmt(r.fitness));

  std::string detail;
  for (const auto& [key, r] : rows)
    if (key.second == "ees1") detail += key.first + " ees1 " + fmt(r.evals) + " evals rate " + fmt(r.rate, 3) + "; ";
  if (problems.empty()) return {true, detail};
  std::string msg;
  for (const auto& p : problems) msg += p + "; ";
  return {false, msg + "[" + detail + "]"};
}

// 3. tune-period reaches the target period; two reference rows score directly.
Outcome period_tuning() {
  const fs::path dir = scratch_root() / "c3";
  cli::RunSettings settings;
  settings.out_dir = dir;
  std::ostringstream log;
  const int status = cli::cmd_tune_period(kC3Target, "pso", settings, std::nullopt, std::nullopt, log);
  if (status != 0) return {false, "tune-period exited with " + std::to_string(status) + ": " + log.str()};

  const csv::Table best = csv::read_table(dir / "best.csv");
  const double cost = best.column("fitness").at(0);
  const std::size_t evals = data_rows(dir / "visited_space.csv");
  const TimeSeries series = csv::to_time_series(csv::read_table(dir / "series.csv"));
  const auto period = naiveperiod(series.channel("y"), series.t());
  const double rel = period ? std::fabs(*period - kC3Target) / kC3Target : 1.0;

  // reference parameter rows for periods 12 and 72
  const double row12 = period_tuning_cost({1.798102, 1.618035, 1.192361, 1.453045}, 12.0);
  const double row72 = period_tuning_cost({0.3297914, 0.4675479, 1.650108, 0.778639}, 72.0);

  const bool pass = cost <= kC3MaxCost && period && rel <= kC3MaxPeriodError && evals <= kC3MaxEvals &&
                    row12 <= kC3MaxCost && row72 <= kC3MaxCost;
  return {pass, "best cost " + fmt(cost) + ", y period " + (period ? fmt(*period, 5) : std::string("none")) +
                    " (" + fmt(100 * rel, 3) + "% off), " + std::to_string(evals) + " evals, row 12 cost " +
                    fmt(row12) + ", row 72 cost " + fmt(row72)};
}

// 4. Exhaustive stratum census over random LHS instances.
Outcome lhs_property_suite() {
  Rng rng(kDefaultSeed);
  std::size_t bad = 0;
  std::size_t total_points = 0;
  for (std::size_t inst = 0; inst < kC4Instances; ++inst) {
    const auto d = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 8)(rng));
    const auto n = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 120)(rng));
    ParameterSpace space;
    for (std::size_t j = 0; j < d; ++j) {
      const double lo = uniform(rng, -1000.0, 1000.0);
      const double width = std::pow(10.0, uniform(rng, -3.0, 4.0));
      space.add({"p" + std::to_string(j), lo, lo + width});
    }
    const SampleMatrix m = lhs(space, n, rng);
    total_points += m.size();
    bool ok = m.size() == n;
    for (const auto& row : m) ok = ok && row.size() == d && space.contains(row);
    for (const auto& counts : oracle::lhs_census(m, space.lower(), space.upper()))
      for (const std::size_t c : counts) ok = ok && c == 1;
    if (!ok) ++bad;
  }
  return {bad == 0, std::to_string(kC4Instances - bad) + "/" + std::to_string(kC4Instances) +
                        " instances with one sample per stratum in every dimension (" +
                        std::to_string(total_points) + " points)"};
}

// 5. Empirical uphill acceptance against exp(-delta/T).
Outcome sa_acceptance_law() {
  Rng rng(kDefaultSeed);
  double worst = 0.0;
  for (const double t : {0.1, 1.0, 10.0})
    for (const double delta : {0.05, 0.5, 5.0}) {
      std::size_t accepted = 0;
      for (std::size_t i = 0; i < kC5Trials; ++i) accepted += saa_accept(delta, t, rng) ? 1 : 0;
      const double freq = static_cast<double>(accepted) / static_cast<double>(kC5Trials);
      worst = std::max(worst, std::fabs(freq - std::exp(-delta / t)));
    }
  return {worst <= kC5MaxDeviation, "max |empirical - exp(-d/T)| = " + fmt(worst, 3) + " over 9 (T, d) pairs"};
}

// 6. DP distance against brute-force alignment enumeration.
Outcome dtw_oracle_equivalence() {
  std::vector<std::vector<double>> series;
  for (std::size_t len = 1; len <= kC6MaxLength; ++len) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < len; ++i) count *= 3;
    for (std::size_t code = 0; code < count; ++code) {
      std::vector<double> s(len);
      std::size_t c = code;
      for (std::size_t i = 0; i < len; ++i, c /= 3) s[i] = static_cast<double>(c % 3);
      series.push_back(std::move(s));
    }
  }
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> mismatches{0};
  {
    std::vector<std::jthread> pool;
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < series.size(); i = next++)
          for (const auto& b : series)
            if (dtw_distance(series[i], b) != oracle::dtw_brute_force(series[i], b)) ++mismatches;
      });
  }
  const std::size_t pairs = series.size() * series.size();
  return {mismatches == 0, std::to_string(pairs - mismatches) + "/" + std::to_string(pairs) + " pairs agree exactly"};
}

// 7. Error ratios of the integrator against the predator-free closed form.
Outcome integrator_order() {
  const PredatorPreyParams p{1.0, 0.7, 1.3, 0.4};
  std::vector<double> errors;
  for (const double dt : {0.1, 0.05, 0.025, 0.0125}) {
    const TimeSeries ts = integrate_predator_prey(p, 1.0, 0.0, 2.0, dt);
    const double t = ts.t().back();
    errors.push_back(std::fabs(ts.channel("x").back() - oracle::prey_without_predator(1.0, p.c1, t)));
  }
  bool pass = true;
  std::string detail = "ratios";
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double r = errors[i] / errors[i + 1];
    pass = pass && r >= kC7RatioLow && r <= kC7RatioHigh;
    detail += " " + fmt(r, 4);
  }
  return {pass, detail + " (want 16 +- 4)"};
}

// 8. EES2 shrinks the k-best span around the optimum of the sphere.
Outcome ees2_focusing() {
  std::size_t shrink_ok = 0;
  std::size_t contain_ok = 0;
  double worst_shrink = std::numeric_limits<double>::infinity();
  const std::size_t k = OptionsEES2{}.selected();
  for (std::size_t s = 0; s < kSeeds; ++s) {
    const ParameterSpace space = box(4, -100.0, 100.0);
    Objective obj(space, sphere, 0.0);  // run the whole default budget
    const Estimates est = extremize(Method::ees2, obj, std::nullopt, kDefaultSeed + s);
    std::vector<Candidate> sorted = est.visited_space;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Candidate& a, const Candidate& b) { return a.fitness < b.fitness; });
    bool shrinks = true;
    bool contains = true;
    for (std::size_t j = 0; j < space.dimension(); ++j) {
      double lo = sorted[0].values[j];
      double hi = lo;
      for (std::size_t i = 0; i < k; ++i) {
        lo = std::min(lo, sorted[i].values[j]);
        hi = std::max(hi, sorted[i].values[j]);
      }
      const double shrink = (space[j].max - space[j].min) / (hi - lo);
      worst_shrink = std::min(worst_shrink, shrink);
      shrinks = shrinks && shrink >= kC8MinShrink;
      contains = contains && lo <= 0.0 && hi >= 0.0;
    }
    shrink_ok += shrinks;
    contain_ok += contains;
  }
  const bool pass = shrink_ok == kSeeds && contain_ok == kSeeds;
  return {pass, "span shrinks >= 10x in " + std::to_string(shrink_ok) + "/7 seeds (smallest factor " +
                    fmt(worst_shrink, 3) + "), contains the origin in " + std::to_string(contain_ok) + "/7 seeds"};
}

// 9. Bookkeeping identities for every algorithm.
Outcome bookkeeping() {
  std::vector<std::string> problems;
  std::string detail;
  for (const auto& key : method_keys()) {
    const BenchmarkFunction f{TestFunction::rosenbrock, 2};
    Objective obj = make_benchmark_objective(f, 1e-3);
    const Method m = parse_method(key);
    const Estimates est = extremize(m, obj, std::nullopt, kDefaultSeed);
    const fs::path dir = scratch_root() / ("c9-" + key);
    fs::create_directories(dir);
    cli::write_run_outputs(dir, obj.space(), est, kDefaultSeed, obj.tolerance(), default_options(m), false);
    const auto stats = nlohmann::json::parse(slurp(dir / "stats.json"));
    double min_fit = std::numeric_limits<double>::infinity();
    for (const auto& c : est.visited_space) min_fit = std::min(min_fit, c.fitness);
    const std::size_t rows = data_rows(dir / "visited_space.csv");
    if (est.stats.total_evals != est.visited_space.size()) problems.push_back(key + ": total_evals != |visited|");
    if (rows != est.stats.total_evals) problems.push_back(key + ": CSV rows != total_evals");
    if (stats["total_evals"].get<std::size_t>() != rows) problems.push_back(key + ": stats.json != CSV rows");
    if (est.best.fitness != min_fit) problems.push_back(key + ": best != visited minimum");
    detail += key + " " + std::to_string(rows) + " ";
  }
  std::string msg;
  for (const auto& p : problems) msg += p + "; ";
  return {problems.empty(), problems.empty() ? "rows: " + detail : msg};
}

// 10. The subprocess path visits exactly what the in-process objective visits.
Outcome subprocess_transparency() {
  const fs::path dir = scratch_root() / "c10";
  fs::create_directories(dir);
  {
    std::ofstream ref(dir / "zero.csv");
    ref << "f\n0\n";
  }
  const ParameterSpace space = box(2, -100.0, 100.0);
  ExternalModelSpec spec;
  spec.command_template = std::string("'") + METAESTIM_MOCK_MODEL + "' rosenbrock {x1} {x2}";
  spec.working_dir = dir;
  spec.timeout = 30;
  spec.reference = dir / "zero.csv";
  spec.cost.kind = CostKind::rmsd_columns;
  spec.cost.columns = {{"f", "f"}};

  std::string detail;
  bool pass = true;
  for (const auto& [method, jobs] : {std::pair{Method::pso, 1u}, std::pair{Method::ees1, 4u}}) {
    const BenchmarkFunction f{TestFunction::rosenbrock, 2};
    Objective direct = make_benchmark_objective(f, kC1Tolerance);
    direct.set_evaluation_budget(kC10Budget);
    Objective external = make_objective(spec, space, kC1Tolerance);
    external.set_evaluation_budget(kC10Budget);
    external.set_parallelism(jobs);
    const Estimates a = extremize(method, direct, std::nullopt, kDefaultSeed);
    const Estimates b = extremize(method, external, std::nullopt, kDefaultSeed);
    bool same = a.visited_space.size() == b.visited_space.size() && b.failures.empty();
    for (std::size_t i = 0; same && i < a.visited_space.size(); ++i)
      same = a.visited_space[i].values == b.visited_space[i].values &&
             a.visited_space[i].fitness == b.visited_space[i].fitness;
    pass = pass && same;
    detail += to_string(method) + " (jobs " + std::to_string(jobs) + "): " + std::to_string(b.visited_space.size()) +
              " vectors " + (same ? "identical" : "DIFFER") + "; ";
  }
  return {pass, detail};
}

// 11. Every CLI command, run twice, writes byte-identical files.
Outcome determinism() {
  const fs::path dir = scratch_root() / "c11";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "rosen2.txt") << "objective = benchmark:rosenbrock\ndimension = 2\nmethod = pso\n";
    std::ofstream(dir / "rosen4.txt") << "objective = benchmark:rosenbrock\ndimension = 4\nmethod = ees2\n";
    std::ofstream(dir / "zero.csv") << "f\n0\n";
    std::ofstream(dir / "external.json")
        << "{\"objective\": {\"type\": \"external\"},\n"
           " \"parameters\": [[\"x1\", -5, 5], [\"x2\", -5, 5]],\n"
           " \"method\": \"ees1\", \"budget\": 60,\n"
           " \"model\": {\"command\": \"'"
        << METAESTIM_MOCK_MODEL
        << "' rosenbrock {x1} {x2}\", \"reference\": \"zero.csv\", \"timeout\": 30},\n"
           " \"cost\": {\"kind\": \"rmsd-columns\", \"columns\": [[\"f\", \"f\"]]}}\n";
  }
  const std::string cli = std::string("'") + METAESTIM_CLI + "'";
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"extremize", cli + " extremize rosen2.txt --out {out}"},
      {"extremize-external", cli + " extremize external.json --jobs 3 --out {out}"},
      {"benchmark", cli + " benchmark --replicates 7 --tolerance 0.1 --seed 5 --out {out}/report.csv"},
      {"explore", cli + " explore rosen4.txt --budget 620 --grid 8 --out {out}"},
      {"tune-period", cli + " tune-period --target 72 --method pso --out {out}"},
  };
  std::string detail;
  bool pass = true;
  for (const auto& [name, tmpl] : commands) {
    std::vector<std::map<std::string, std::string>> runs;
    for (const char* tag : {"a", "b"}) {
      const fs::path out = dir / (name + "-" + tag);
      std::string cmd = tmpl;
      cmd.replace(cmd.find("{out}"), 5, "'" + out.string() + "'");
      if (const auto pos = cmd.find("{out}"); pos != std::string::npos) cmd.replace(pos, 5, "'" + out.string() + "'");
      fs::create_directories(out);
      ProcessRequest req;
      req.command = cmd;
      req.working_dir = dir;
      req.timeout_seconds = 300;
      const ProcessResult res = run_process(req);
      if (!res.ok()) return {false, name + " failed: " + res.stderr_text};
      std::map<std::string, std::string> files;
      for (const auto& e : fs::directory_iterator(out)) files[e.path().filename().string()] = slurp(e.path());
      runs.push_back(std::move(files));
    }
    const bool same = runs[0] == runs[1] && !runs[0].empty();
    pass = pass && same;
    detail += name + " " + std::to_string(runs[0].size()) + " files " + (same ? "identical" : "DIFFER") + "; ";
  }
  return {pass, detail};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  double max_seconds;  // 0 = no limit
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Rosenbrock walkthrough", rosenbrock_walkthrough, kC1MaxSeconds},
      {2, "Benchmark report shape", benchmark_report_shape, kC2MaxSeconds},
      {3, "Period tuning", period_tuning, kC3MaxSeconds},
      {4, "LHS property suite", lhs_property_suite, kC4MaxSeconds},
      {5, "SA acceptance law", sa_acceptance_law, kC5MaxSeconds},
      {6, "DTW oracle equivalence", dtw_oracle_equivalence, kC6MaxSeconds},
      {7, "Integrator order", integrator_order, 0},
      {8, "EES2 focusing", ees2_focusing, 0},
      {9, "Bookkeeping", bookkeeping, 0},
      {10, "Subprocess transparency", subprocess_transparency, 0},
      {11, "Determinism", determinism, 0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.max_seconds > 0 && secs > c.max_seconds) {
      o.pass = false;
      o.detail += " [over the " + fmt(c.max_seconds) + " s limit]";
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %2d  %-24s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::error_code ec;
  fs::remove_all(scratch_root(), ec);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
