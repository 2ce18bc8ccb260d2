#ifndef METAESTIM_CLI_PROBLEM_HPP
#define METAESTIM_CLI_PROBLEM_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "metaestim/core.hpp"
#include "metaestim/extmodel.hpp"
#include "metaestim/extremize.hpp"
#include "metaestim/test_functions.hpp"

namespace metaestim::cli {

/// Invalid problem file or command-line value (exit status 2).
class ProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The objective could not be set up (exit status 3).
class SetupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ObjectiveKind { benchmark, period, external };

struct Problem {
  ObjectiveKind kind = ObjectiveKind::benchmark;
  TestFunction function = TestFunction::rosenbrock;
  std::size_t dimension = 2;
  double period_target = 0.0;
  ExternalModelSpec model;

  ParameterSpace space;
  std::optional<Method> method;
  std::map<std::string, std::string, std::less<>> options;
  std::uint64_t seed = kDefaultSeed;
  double tolerance = kDefaultTolerance;
  std::optional<std::size_t> budget;
};

/// Parameter names of the period-tuning objective and their default box.
ParameterSpace period_space();

/// Parses either the line-oriented key = value form or JSON (text starting
/// with '{'). Relative model paths are resolved against base_dir. Throws
/// ProblemError.
Problem parse_problem(std::string_view text, const std::filesystem::path& base_dir = ".");
Problem load_problem(const std::filesystem::path& path);

/// Defaults of `method` overridden by `options`; unknown keys or bad values
/// throw ProblemError naming the accepted keys.
AlgorithmOptions resolve_options(Method method, const std::map<std::string, std::string, std::less<>>& options);

/// Throws SetupError when the objective cannot be built.
Objective build_objective(const Problem& problem, unsigned jobs = 1);

}  // namespace metaestim::cli

#endif  // METAESTIM_CLI_PROBLEM_HPP
