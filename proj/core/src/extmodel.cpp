#include "metaestim/extmodel.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "metaestim/subprocess.hpp"

namespace metaestim {

namespace fs = std::filesystem;

OutputMode output_mode_from_name(std::string_view name) {
  if (name == "stdout-csv" || name == "stdout") return OutputMode::stdout_csv;
  if (name == "file-csv" || name == "file") return OutputMode::file_csv;
  throw std::invalid_argument("unknown output mode '" + std::string(name) + "' (valid: stdout-csv, file-csv)");
}

CostKind cost_kind_from_name(std::string_view name) {
  if (name == "rmsd-columns") return CostKind::rmsd_columns;
  if (name == "nrmsd-columns") return CostKind::nrmsd_columns;
  if (name == "dtw-columns") return CostKind::dtw_columns;
  if (name == "command") return CostKind::command;
  throw std::invalid_argument("unknown cost kind '" + std::string(name) +
                              "' (valid: rmsd-columns, nrmsd-columns, dtw-columns, command)");
}

std::string_view to_string(OutputMode m) noexcept { return m == OutputMode::stdout_csv ? "stdout-csv" : "file-csv"; }

std::string_view to_string(CostKind k) noexcept {
  switch (k) {
    case CostKind::rmsd_columns: return "rmsd-columns";
    case CostKind::nrmsd_columns: return "nrmsd-columns";
    case CostKind::dtw_columns: return "dtw-columns";
    case CostKind::command: return "command";
  }
  return "?";
}

std::vector<std::string> template_placeholders(std::string_view tmpl) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '}') throw std::invalid_argument("unbalanced '}' in template");
    if (tmpl[i] != '{') {
      ++i;
      continue;
    }
    const std::size_t close = tmpl.find('}', i + 1);
    if (close == std::string_view::npos) throw std::invalid_argument("unterminated '{' in template");
    const std::string_view name = tmpl.substr(i + 1, close - i - 1);
    if (name.empty() || name.find('{') != std::string_view::npos)
      throw std::invalid_argument("bad placeholder in template");
    out.emplace_back(name);
    i = close + 1;
  }
  return out;
}

std::string substitute(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values) {
  std::string out;
  std::size_t i = 0;
  template_placeholders(tmpl);  // syntax check
  while (i < tmpl.size()) {
    if (tmpl[i] != '{') {
      out += tmpl[i++];
      continue;
    }
    const std::size_t close = tmpl.find('}', i);
    const std::string_view name = tmpl.substr(i + 1, close - i - 1);
    const auto it = values.find(name);
    if (it == values.end()) throw std::invalid_argument("no value for placeholder {" + std::string(name) + "}");
    out += it->second;
    i = close + 1;
  }
  return out;
}

namespace {

bool is_reserved(std::string_view name) {
  return name == "params_file" || name == "eval_dir" || name == "eval_id";
}

std::string tail(const std::string& s, std::size_t n = 2000) { return s.size() <= n ? s : "..." + s.substr(s.size() - n); }

// per-evaluation scratch directory, removed on scope exit
class ScratchDir {
 public:
  explicit ScratchDir(std::uint64_t eval_id) {
    static std::atomic<std::uint64_t> counter{0};
    path_ = fs::temp_directory_path() / ("metaestim-" + std::to_string(::getpid()) + "-" + std::to_string(eval_id) +
                                         "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const noexcept { return path_; }

 private:
  fs::path path_;
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw EvaluationError("cannot write " + p.string());
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw EvaluationError("model output file not found: " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RawRun {
  std::string csv_text;
  TimeSeries series;
};

RawRun run_in(const ExternalModelSpec& spec, const ParamMap& params, std::uint64_t eval_id, const ScratchDir& dir) {
  std::map<std::string, std::string, std::less<>> values;
  for (const auto& [k, v] : params) values[k] = csv::format_double(v);
  values["eval_dir"] = dir.path().string();
  values["eval_id"] = std::to_string(eval_id);
  const fs::path params_file = dir.path() / "params.csv";
  values["params_file"] = params_file.string();

  // throws invalid_argument for a missing parameter, before anything runs
  const std::string command = substitute(spec.command_template, values);
  const std::string output_path =
      spec.output_mode == OutputMode::file_csv ? substitute(spec.output_path, values) : std::string();

  {
    std::string header, row;
    for (const auto& [k, v] : values) {
      if (is_reserved(k)) continue;
      header += (header.empty() ? "" : ",") + k;
      row += (row.empty() ? "" : ",") + v;
    }
    write_file(params_file, header + "\n" + row + "\n");
  }

  ProcessRequest req;
  req.command = command;
  req.working_dir = spec.working_dir;
  req.extra_env = {{"METAESTIM_EVAL_ID", std::to_string(eval_id)}};
  req.timeout_seconds = spec.timeout;
  ProcessResult res;
  try {
    res = run_process(req);
  } catch (const std::system_error& e) {
    throw EvaluationError(std::string("cannot launch model: ") + e.what());
  }
  if (res.timed_out)
    throw EvaluationError("model timed out after " + csv::format_double(spec.timeout) + " s: " + command +
                          "\nstderr: " + tail(res.stderr_text));
  if (res.term_signal != 0)
    throw EvaluationError("model killed by signal " + std::to_string(res.term_signal) + ": " + command +
                          "\nstderr: " + tail(res.stderr_text));
  if (res.exit_code != 0)
    throw EvaluationError("model exited with status " + std::to_string(res.exit_code) + ": " + command +
                          "\nstderr: " + tail(res.stderr_text));

  RawRun out;
  if (spec.output_mode == OutputMode::stdout_csv) {
    out.csv_text = std::move(res.stdout_text);
  } else {
    fs::path p(output_path);
    if (p.is_relative()) p = spec.working_dir / p;
    out.csv_text = read_file(p);
  }
  try {
    out.series = csv::to_time_series(csv::parse_table(out.csv_text));
  } catch (const std::exception& e) {
    throw EvaluationError(std::string("malformed model output: ") + e.what() + "\noutput: " + tail(out.csv_text, 500));
  }
  return out;
}

const std::vector<double>& column_of(const TimeSeries& ts, const std::string& name, const char* side) {
  if (name == "t") return ts.t();
  if (!ts.has_channel(name)) throw EvaluationError(std::string(side) + " output has no column '" + name + "'");
  return ts.channel(name);
}

double command_cost(const ExternalModelSpec& spec, const RawRun& run, const ScratchDir& dir) {
  const fs::path model_csv = dir.path() / "model.csv";
  write_file(model_csv, run.csv_text);
  std::map<std::string, std::string, std::less<>> values{
      {"model_csv", model_csv.string()},
      {"eval_dir", dir.path().string()},
  };
  if (spec.reference) values["reference_csv"] = fs::absolute(*spec.reference).string();

  ProcessRequest req;
  req.command = substitute(spec.cost.command, values);
  req.working_dir = spec.working_dir;
  req.stdin_text = run.csv_text;
  req.timeout_seconds = spec.timeout;
  ProcessResult res;
  try {
    res = run_process(req);
  } catch (const std::system_error& e) {
    throw EvaluationError(std::string("cannot launch scorer: ") + e.what());
  }
  if (!res.ok())
    throw EvaluationError("scorer failed (status " + std::to_string(res.exit_code) +
                          (res.timed_out ? ", timed out" : "") + "): " + req.command + "\nstderr: " + tail(res.stderr_text));
  std::istringstream in(res.stdout_text);
  std::string token;
  if (!(in >> token)) throw EvaluationError("scorer printed nothing");
  try {
    return csv::parse_double(token);
  } catch (const std::invalid_argument&) {
    throw EvaluationError("scorer output is not a number: '" + token + "'");
  }
}

}  // namespace

void validate(const ExternalModelSpec& spec, const ParameterSpace& space) {
  if (spec.command_template.empty()) throw std::invalid_argument("model command is empty");
  if (!(spec.timeout > 0.0)) throw std::invalid_argument("model timeout must be > 0");
  if (space.dimension() == 0) throw std::invalid_argument("no parameters defined");

  const auto used = template_placeholders(spec.command_template);
  bool uses_file = false;
  for (const auto& name : used) {
    if (name == "params_file") {
      uses_file = true;
      continue;
    }
    if (is_reserved(name)) continue;
    if (!space.index_of(name))
      throw std::invalid_argument("placeholder {" + name + "} does not name a parameter");
  }
  for (const auto& p : space.params()) {
    const auto n = std::count(used.begin(), used.end(), p.name);
    if (n > 1) throw std::invalid_argument("parameter '" + p.name + "' appears more than once in the command");
    if (n == 0 && !uses_file)
      throw std::invalid_argument("parameter '" + p.name + "' is neither in the command nor passed via {params_file}");
  }
  if (spec.output_mode == OutputMode::file_csv) {
    if (spec.output_path.empty()) throw std::invalid_argument("file-csv output needs an output path");
    for (const auto& name : template_placeholders(spec.output_path))
      if (!is_reserved(name) && !space.index_of(name))
        throw std::invalid_argument("placeholder {" + name + "} in output path does not name a parameter");
  }

  const CostSpec& c = spec.cost;
  if (c.kind == CostKind::command) {
    if (c.command.empty()) throw std::invalid_argument("cost kind 'command' needs a scorer command");
    for (const auto& name : template_placeholders(c.command)) {
      if (name == "reference_csv" && !spec.reference)
        throw std::invalid_argument("scorer uses {reference_csv} but no reference is given");
      if (name != "model_csv" && name != "reference_csv" && name != "eval_dir")
        throw std::invalid_argument("unknown placeholder {" + name + "} in scorer command");
    }
  } else {
    if (!spec.reference) throw std::invalid_argument("column costs need a reference CSV");
    if (c.columns.empty()) throw std::invalid_argument("column costs need at least one column pair");
  }
}

TimeSeries run_model(const ExternalModelSpec& spec, const ParamMap& params, std::uint64_t eval_id) {
  ScratchDir dir(eval_id);
  return run_in(spec, params, eval_id, dir).series;
}

double column_cost(const CostSpec& cost, const TimeSeries& model, const TimeSeries& reference,
                   const WarningSink& warn) {
  if (cost.kind == CostKind::command) throw std::invalid_argument("column_cost: not a column cost");
  double total = 0.0;
  for (const auto& pair : cost.columns) {
    const auto& mc = column_of(model, pair.model, "model");
    const auto& rc = column_of(reference, pair.reference, "reference");

    auto kept_rows = [&](const TimeSeries& ts) {
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < ts.size(); ++i)
        if (!cost.skip_until || ts.t()[i] > *cost.skip_until) rows.push_back(i);
      return rows;
    };
    const auto mrows = kept_rows(model);
    const auto rrows = kept_rows(reference);
    if (mrows.size() != rrows.size() && warn)
      warn("column " + pair.model + "/" + pair.reference + ": model has " + std::to_string(mrows.size()) +
           " rows, reference " + std::to_string(rrows.size()) + "; truncating to the shorter");

    std::vector<double> a, b;
    const std::size_t n = std::min(mrows.size(), rrows.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double x = mc[mrows[i]];
      const double y = rc[rrows[i]];
      if (std::isnan(x) || std::isnan(y)) continue;
      a.push_back(x);
      b.push_back(y);
    }
    if (a.empty()) throw EvaluationError("no comparable rows for column " + pair.model + "/" + pair.reference);
    switch (cost.kind) {
      case CostKind::rmsd_columns: total += rmsd(a, b); break;
      case CostKind::nrmsd_columns: total += nrmsd(a, b); break;
      case CostKind::dtw_columns: total += dtw_distance(a, b); break;
      case CostKind::command: break;
    }
  }
  return total;
}

Objective make_objective(const ExternalModelSpec& spec, const ParameterSpace& space, double tolerance) {
  validate(spec, space);
  auto shared = std::make_shared<const ExternalModelSpec>(spec);
  std::shared_ptr<const TimeSeries> reference;
  if (spec.reference) {
    try {
      reference = std::make_shared<const TimeSeries>(csv::to_time_series(csv::read_table(*spec.reference)));
    } catch (const std::exception& e) {
      throw std::runtime_error("cannot load reference " + spec.reference->string() + ": " + e.what());
    }
  }
  const std::vector<std::string> names = space.names();

  ContextEvaluator eval = [shared, reference, names](std::span<const double> v, const EvaluationContext& ctx) {
    ParamMap params;
    for (std::size_t i = 0; i < names.size(); ++i) params[names[i]] = v[i];
    ScratchDir dir(ctx.pset);
    const RawRun run = run_in(*shared, params, ctx.pset, dir);
    if (shared->cost.kind == CostKind::command) return command_cost(*shared, run, dir);
    return column_cost(shared->cost, run.series, *reference, shared->on_warning);
  };
  return Objective(space, std::move(eval), tolerance);
}

}  // namespace metaestim
