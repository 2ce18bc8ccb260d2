#ifndef METAESTIM_CLI_COMMANDS_HPP
#define METAESTIM_CLI_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "metaestim/cli/problem.hpp"

namespace metaestim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitSetup = 3;

struct RunSettings {
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  /// Concurrent external model runs.
  unsigned jobs = 1;
  /// Record wall time in stats.json (makes the file run-dependent).
  bool timing = false;
};

/// Min-fitness grid over one parameter pair. Empty cells have no value.
struct Surface {
  std::string x_name;
  std::string y_name;
  std::size_t grid = 0;
  std::vector<double> x_centers;
  std::vector<double> y_centers;
  /// Row-major over (x, y): cells[ix * grid + iy].
  std::vector<std::optional<double>> cells;

  void write_csv(std::ostream& os) const;
};

Surface bin_surface(const ParameterSpace& space, std::span<const Candidate> visited, std::size_t i, std::size_t j,
                    std::size_t grid);

/// Cyclic adjacent pairs (0,1), (1,2), ..., (d-1,0); a single pair for d = 2.
std::vector<std::pair<std::size_t, std::size_t>> surface_pairs(std::size_t dimension);

/// Writes best.csv, iteration_bests.csv, visited_space.csv, stats.json and,
/// when evaluations failed, run.log.
void write_run_outputs(const std::filesystem::path& dir, const ParameterSpace& space, const Estimates& est,
                       std::uint64_t seed, double tolerance, const AlgorithmOptions& options, bool timing);

// Each returns the process exit status and reports problems on `err`.
int cmd_extremize(const std::filesystem::path& problem, const RunSettings& settings, std::ostream& err);
int cmd_benchmark(std::size_t replicates, double tolerance, std::uint64_t seed, const std::filesystem::path& out,
                  unsigned jobs, std::ostream& err);
int cmd_explore(const std::filesystem::path& problem, std::size_t budget, std::size_t grid,
                const RunSettings& settings, std::ostream& err);
int cmd_tune_period(double target, const std::string& method, const RunSettings& settings,
                    std::optional<std::size_t> budget, std::optional<double> tolerance, std::ostream& err);

}  // namespace metaestim::cli

#endif  // METAESTIM_CLI_COMMANDS_HPP
