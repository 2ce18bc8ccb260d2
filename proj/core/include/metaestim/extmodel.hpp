#ifndef METAESTIM_EXTMODEL_HPP
#define METAESTIM_EXTMODEL_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaestim/core.hpp"
#include "metaestim/csv.hpp"
#include "metaestim/dynamics.hpp"

namespace metaestim {

enum class OutputMode { stdout_csv, file_csv };
enum class CostKind { rmsd_columns, nrmsd_columns, dtw_columns, command };

OutputMode output_mode_from_name(std::string_view name);
CostKind cost_kind_from_name(std::string_view name);
std::string_view to_string(OutputMode m) noexcept;
std::string_view to_string(CostKind k) noexcept;

struct ColumnPair {
  std::string model;
  std::string reference;
};

struct CostSpec {
  CostKind kind = CostKind::rmsd_columns;
  std::vector<ColumnPair> columns;
  /// Scorer for kind == command. Placeholders: {model_csv}, {reference_csv},
  /// {eval_dir}. The model CSV is also written to its stdin; the first token
  /// of its output is the cost.
  std::string command;
  /// Rows with t <= skip_until are dropped on both sides before comparing.
  std::optional<double> skip_until;
};

/// Called with non-fatal notes such as a length mismatch. May be invoked
/// from several threads at once.
using WarningSink = std::function<void(const std::string&)>;

struct ExternalModelSpec {
  /// `{name}` is replaced by the parameter value. Reserved placeholders:
  /// {params_file} (a params.csv with a header row and one value row),
  /// {eval_dir} (private scratch directory) and {eval_id} (the pset).
  std::string command_template;
  std::filesystem::path working_dir = ".";
  OutputMode output_mode = OutputMode::stdout_csv;
  /// For file_csv; relative to working_dir, placeholders allowed.
  std::string output_path;
  double timeout = 60.0;
  std::optional<std::filesystem::path> reference;
  CostSpec cost;
  WarningSink on_warning;
};

using ParamMap = std::map<std::string, double, std::less<>>;

/// Placeholder names used by a template, in order of appearance, reserved
/// ones included. Throws std::invalid_argument on an unbalanced brace.
std::vector<std::string> template_placeholders(std::string_view tmpl);

/// Replaces every placeholder from `values`; throws std::invalid_argument
/// when one is missing.
std::string substitute(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values);

/// Throws std::invalid_argument describing the first problem found.
void validate(const ExternalModelSpec& spec, const ParameterSpace& space);

/// Launches one model run and parses its CSV output. Parameters missing for
/// a placeholder are rejected with std::invalid_argument before launch;
/// a failed run (nonzero exit, timeout, signal, malformed CSV) throws
/// EvaluationError carrying the captured stderr.
TimeSeries run_model(const ExternalModelSpec& spec, const ParamMap& params, std::uint64_t eval_id = 0);

/// Cost of a model output under a column metric. Pairs are joined on row
/// index, truncated to the shorter series and rows with a missing (NaN)
/// value on either side are dropped; multiple pairs are summed.
double column_cost(const CostSpec& cost, const TimeSeries& model, const TimeSeries& reference,
                   const WarningSink& warn = {});

/// Objective whose evaluator runs the model and applies the cost spec. The
/// reference CSV is loaded once here; setup problems throw.
Objective make_objective(const ExternalModelSpec& spec, const ParameterSpace& space,
                         double tolerance = kDefaultTolerance);

}  // namespace metaestim

#endif  // METAESTIM_EXTMODEL_HPP
