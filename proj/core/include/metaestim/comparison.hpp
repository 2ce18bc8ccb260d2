#ifndef METAESTIM_COMPARISON_HPP
#define METAESTIM_COMPARISON_HPP

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "metaestim/extremize.hpp"
#include "metaestim/test_functions.hpp"

namespace metaestim {

struct ComparisonRow {
  std::string function;
  std::string algorithm;
  double mean_evaluations = 0.0;
  double convergence_rate = 0.0;
  double mean_fitness = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::size_t replicates = 0;
  double tolerance = kDefaultTolerance;
  std::vector<std::uint64_t> seeds;

  /// `function,algorithm,mean_evals,convergence,mean_fitness`, one line per row.
  void write_csv(std::ostream& os) const;
};

/// Runs every (function, method) cell `replicates` times with seeds
/// seed_base + r and default options. Cells run concurrently on up to `jobs`
/// threads; rows come out function-major in input order.
ComparisonReport compare_algorithms(const std::vector<BenchmarkFunction>& functions,
                                    const std::vector<Method>& methods, std::size_t replicates, double tolerance,
                                    std::uint64_t seed_base, unsigned jobs = 0);

/// The four 4-dimensional functions of the standard comparison grid.
std::vector<BenchmarkFunction> standard_benchmark_functions();
/// pso, saa, acor, ees1.
std::vector<Method> standard_benchmark_methods();

}  // namespace metaestim

#endif  // METAESTIM_COMPARISON_HPP
