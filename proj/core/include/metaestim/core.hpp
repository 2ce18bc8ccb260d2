#ifndef METAESTIM_CORE_HPP
#define METAESTIM_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace metaestim {

/// Cost recorded for an evaluation that failed (crashed model, unparsable output, ...).
inline constexpr double kPenalty = std::numeric_limits<double>::max();

/// Default convergence tolerance on the best fitness.
inline constexpr double kDefaultTolerance = 0.1;

/// Fitness of a candidate that was never evaluated. It never compares better
/// than an evaluated candidate, so algorithms can sort it safely.
inline constexpr double kUnevaluated = std::numeric_limits<double>::infinity();

/// Raised by evaluators to signal a failed evaluation. Any other exception
/// thrown by an evaluator is treated the same way.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParameterDef {
  std::string name;
  double min = 0.0;
  double max = 0.0;
};

/// Ordered set of named, bounded real parameters. Order defines the
/// component order of every parameter vector.
class ParameterSpace {
 public:
  ParameterSpace() = default;
  ParameterSpace(std::initializer_list<ParameterDef> defs);

  /// Appends a parameter. Throws std::invalid_argument on a duplicate or
  /// empty name, or unless min < max.
  ParameterSpace& add(ParameterDef def);

  std::size_t dimension() const noexcept { return params_.size(); }
  bool empty() const noexcept { return params_.empty(); }
  const ParameterDef& operator[](std::size_t i) const { return params_.at(i); }
  std::span<const ParameterDef> params() const noexcept { return params_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::vector<std::string> names() const;
  std::vector<double> lower() const;
  std::vector<double> upper() const;

  /// Projects each component into [min_i, max_i].
  std::vector<double> clamp(std::span<const double> v) const;
  bool contains(std::span<const double> v) const;

 private:
  std::vector<ParameterDef> params_;
};

ParameterSpace add_parameter(ParameterSpace space, ParameterDef def);
std::vector<double> clamp(const ParameterSpace& space, std::span<const double> v);

struct Candidate {
  std::vector<double> values;
  double fitness = kUnevaluated;
  /// 1-based evaluation index; 0 for a candidate that was never evaluated.
  std::uint64_t pset = 0;
  std::uint64_t iteration = 0;

  bool evaluated() const noexcept { return pset != 0; }
};

struct EvaluationFailure {
  std::uint64_t pset = 0;
  std::string message;
};

struct RunStats {
  std::size_t total_evals = 0;
  bool converged = false;
  /// Best fitness reached by the run.
  double achieved_tolerance = kUnevaluated;
  double wall_time = 0.0;
};

struct Estimates {
  std::string method;
  Candidate best;
  std::vector<Candidate> iteration_bests;
  std::vector<Candidate> visited_space;
  std::vector<EvaluationFailure> failures;
  RunStats stats;
};

/// Maps a parameter vector, ordered as the owning ParameterSpace, to a cost.
using Evaluator = std::function<double(std::span<const double>)>;

/// Context handed to evaluators that want to know which evaluation they serve.
struct EvaluationContext {
  std::uint64_t pset = 0;
  std::uint64_t iteration = 0;
};
using ContextEvaluator = std::function<double(std::span<const double>, const EvaluationContext&)>;

/// The evaluation contract shared by every algorithm: a parameter space, a
/// cost function and the bookkeeping of everything that was evaluated.
///
/// Batches may be evaluated concurrently (see set_parallelism); the visited
/// log is always appended in batch order, so the record is deterministic for
/// deterministic evaluators.
class Objective {
 public:
  Objective(ParameterSpace space, Evaluator evaluator, double tolerance = kDefaultTolerance);
  Objective(ParameterSpace space, ContextEvaluator evaluator, double tolerance = kDefaultTolerance);

  const ParameterSpace& space() const noexcept { return space_; }
  std::size_t dimension() const noexcept { return space_.dimension(); }

  double tolerance() const noexcept { return tolerance_; }
  void set_tolerance(double tolerance);

  /// Caps the total number of evaluations; 0 means unlimited. A batch that
  /// crosses the cap is truncated and its remaining entries are reported as
  /// kUnevaluated.
  void set_evaluation_budget(std::size_t max_evals) noexcept { budget_ = max_evals; }
  std::size_t evaluation_budget() const noexcept { return budget_; }
  bool budget_exhausted() const noexcept { return budget_ != 0 && visited_.size() >= budget_; }

  /// Number of worker threads used for a batch (1 = sequential).
  void set_parallelism(unsigned jobs) noexcept { jobs_ = jobs == 0 ? 1 : jobs; }
  unsigned parallelism() const noexcept { return jobs_; }

  /// Evaluates every vector of the batch. Vectors must lie inside the box.
  std::vector<double> evaluate(std::span<const std::vector<double>> batch, std::uint64_t iteration = 0);
  double evaluate(std::span<const double> v, std::uint64_t iteration = 0);

  /// As evaluate, returning the recorded candidates (pset, iteration, fitness).
  std::vector<Candidate> evaluate_candidates(std::span<const std::vector<double>> batch,
                                             std::uint64_t iteration = 0);

  bool is_converged(double best_fitness) const noexcept { return best_fitness <= tolerance_; }

  std::size_t total_evals() const noexcept { return visited_.size(); }
  const std::vector<Candidate>& visited() const noexcept { return visited_; }
  const std::vector<EvaluationFailure>& failures() const noexcept { return failures_; }

  /// Forgets all evaluations; the space, evaluator and settings are kept.
  void reset();

 private:
  ParameterSpace space_;
  ContextEvaluator evaluator_;
  double tolerance_;
  std::size_t budget_ = 0;
  unsigned jobs_ = 1;
  std::vector<Candidate> visited_;
  std::vector<EvaluationFailure> failures_;
};

bool is_converged(const Objective& obj, double best_fitness);

/// Assembles the result of a run from the objective's bookkeeping: best is
/// the first visited candidate of minimal fitness.
Estimates make_estimates(std::string method, const Objective& obj, std::vector<Candidate> iteration_bests,
                         double wall_time);

}  // namespace metaestim

#endif  // METAESTIM_CORE_HPP
