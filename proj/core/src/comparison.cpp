#include "metaestim/comparison.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

#include "metaestim/csv.hpp"

namespace metaestim {

void ComparisonReport::write_csv(std::ostream& os) const {
  os << "function,algorithm,mean_evals,convergence,mean_fitness\n";
  for (const auto& r : rows)
    os << r.function << ',' << r.algorithm << ',' << csv::format_double(r.mean_evaluations) << ','
       << csv::format_double(r.convergence_rate) << ',' << csv::format_double(r.mean_fitness) << '\n';
}

namespace {

ComparisonRow run_cell(const BenchmarkFunction& f, Method m, std::size_t replicates, double tolerance,
                       std::uint64_t seed_base) {
  double evals = 0.0;
  double fitness = 0.0;
  std::size_t converged = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    Objective obj = make_benchmark_objective(f, tolerance);
    const Estimates est = extremize(m, obj, std::nullopt, seed_base + r);
    evals += static_cast<double>(est.stats.total_evals);
    fitness += est.best.fitness;
    if (est.stats.converged) ++converged;
  }
  const auto n = static_cast<double>(replicates);
  return ComparisonRow{f.name(), to_string(m), evals / n, static_cast<double>(converged) / n, fitness / n};
}

}  // namespace

ComparisonReport compare_algorithms(const std::vector<BenchmarkFunction>& functions,
                                    const std::vector<Method>& methods, std::size_t replicates, double tolerance,
                                    std::uint64_t seed_base, unsigned jobs) {
  if (replicates < 1) throw std::invalid_argument("compare_algorithms: replicates must be >= 1");
  ComparisonReport report;
  report.replicates = replicates;
  report.tolerance = tolerance;
  for (std::size_t r = 0; r < replicates; ++r) report.seeds.push_back(seed_base + r);

  const std::size_t cells = functions.size() * methods.size();
  report.rows.resize(cells);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(jobs, cells);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t c = next++; c < cells; c = next++)
      report.rows[c] = run_cell(functions[c / methods.size()], methods[c % methods.size()], replicates, tolerance,
                                seed_base);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return report;
}

std::vector<BenchmarkFunction> standard_benchmark_functions() {
  return {{TestFunction::cigar, 4}, {TestFunction::schaffer, 4}, {TestFunction::griewank, 4},
          {TestFunction::bohachevsky, 4}};
}

std::vector<Method> standard_benchmark_methods() { return {Method::saa, Method::pso, Method::acor, Method::ees1}; }

}  // namespace metaestim
