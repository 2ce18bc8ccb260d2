#include "metaestim/cli/problem.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "json.hpp"

#include "metaestim/csv.hpp"
#include "metaestim/dynamics.hpp"

namespace metaestim::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

using Entry = std::pair<std::string, std::string>;

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  try {
    return csv::parse_double(v);
  } catch (const std::invalid_argument&) {
    throw ProblemError(key + ": expected a number, got '" + v + "'");
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ProblemError(key + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ProblemError(key + ": expected true or false, got '" + v + "'");
}

std::vector<Entry> parse_key_values(std::string_view text) {
  std::vector<Entry> out;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ProblemError("line " + std::to_string(line_no) + ": expected 'key = value'");
    out.emplace_back(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
  }
  return out;
}

std::string scalar_text(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return csv::format_double(v.get<double>());
  throw ProblemError(key + ": expected a scalar value");
}

// JSON is flattened into the same entries as the key = value form
std::vector<Entry> parse_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProblemError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProblemError("JSON problem must be an object");
  std::vector<Entry> out;
  for (const auto& [key, v] : doc.items()) {
    if (key == "objective" && v.is_object()) {
      const std::string type = v.value("type", "");
      if (type == "benchmark") {
        out.emplace_back("objective", "benchmark:" + v.value("name", ""));
        if (v.contains("dimension")) out.emplace_back("dimension", scalar_text("dimension", v["dimension"]));
      } else if (type == "period") {
        out.emplace_back("objective", "period:" + scalar_text("target", v.value("target", json())));
      } else if (type == "external") {
        out.emplace_back("objective", "external");
      } else {
        throw ProblemError("objective.type must be benchmark, period or external");
      }
    } else if (key == "parameters" || key == "params") {
      if (!v.is_array()) throw ProblemError("parameters must be an array");
      for (const auto& p : v) {
        if (p.is_array() && p.size() == 3)
          out.emplace_back("param", scalar_text("param", p[0]) + "," + scalar_text("param", p[1]) + "," +
                                        scalar_text("param", p[2]));
        else if (p.is_object())
          out.emplace_back("param", scalar_text("param", p.value("name", json())) + "," +
                                        scalar_text("param", p.value("min", json())) + "," +
                                        scalar_text("param", p.value("max", json())));
        else
          throw ProblemError("each parameter must be [name, min, max] or {name, min, max}");
      }
    } else if ((key == "options" || key == "model" || key == "cost") && v.is_object()) {
      const std::string prefix = key == "options" ? "option." : key + ".";
      for (const auto& [k, item] : v.items()) {
        if (prefix == "cost." && k == "columns" && item.is_array()) {
          std::string cols;
          for (const auto& pair : item) {
            if (!pair.is_array() || pair.size() != 2) throw ProblemError("cost.columns entries must be [model, reference]");
            cols += (cols.empty() ? "" : ",") + pair[0].get<std::string>() + ":" + pair[1].get<std::string>();
          }
          out.emplace_back("cost.columns", cols);
        } else if (prefix == "model." && k == "cost" && item.is_object()) {
          for (const auto& [ck, cv] : item.items()) out.emplace_back("cost." + ck, scalar_text(ck, cv));
        } else {
          out.emplace_back(prefix + k, scalar_text(prefix + k, item));
        }
      }
    } else {
      out.emplace_back(key, scalar_text(key, v));
    }
  }
  return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_relative() ? base / path : path;
}

}  // namespace

ParameterSpace period_space() {
  return ParameterSpace{{"x1", 0.2, 2.0}, {"x2", 0.2, 2.0}, {"x3", 0.2, 2.0}, {"x4", 0.2, 2.0}};
}

Problem parse_problem(std::string_view text, const fs::path& base_dir) {
  std::string_view lead = text;
  while (!lead.empty() && (lead.front() == ' ' || lead.front() == '\n' || lead.front() == '\t' || lead.front() == '\r'))
    lead.remove_prefix(1);
  const std::vector<Entry> entries = !lead.empty() && lead.front() == '{' ? parse_json(lead) : parse_key_values(text);

  Problem pb;
  bool have_objective = false;
  bool have_dimension = false;
  pb.model.working_dir = base_dir;
  for (const auto& [key, value] : entries) {
    if (key == "objective") {
      have_objective = true;
      const auto colon = value.find(':');
      const std::string type = trim(value.substr(0, colon));
      const std::string arg = colon == std::string::npos ? "" : trim(value.substr(colon + 1));
      if (type == "benchmark") {
        pb.kind = ObjectiveKind::benchmark;
        try {
          pb.function = parse_test_function(arg);
        } catch (const std::invalid_argument& e) {
          throw ProblemError(e.what());
        }
      } else if (type == "period") {
        pb.kind = ObjectiveKind::period;
        pb.period_target = to_real("objective", arg);
        if (!(pb.period_target > 0.0)) throw ProblemError("period target must be > 0");
      } else if (type == "external") {
        pb.kind = ObjectiveKind::external;
      } else {
        throw ProblemError("objective must be benchmark:<name>, period:<target> or external");
      }
    } else if (key == "dimension") {
      pb.dimension = to_uint(key, value);
      have_dimension = true;
      if (pb.dimension < 1) throw ProblemError("dimension must be >= 1");
    } else if (key == "param") {
      const auto parts = split(value, ',');
      if (parts.size() != 3) throw ProblemError("param: expected 'name,min,max', got '" + value + "'");
      try {
        pb.space.add({parts[0], to_real("param " + parts[0], parts[1]), to_real("param " + parts[0], parts[2])});
      } catch (const std::invalid_argument& e) {
        throw ProblemError(std::string("param: ") + e.what());
      }
    } else if (key == "method") {
      try {
        pb.method = parse_method(value);
      } catch (const std::invalid_argument& e) {
        throw ProblemError(e.what());
      }
    } else if (key == "seed") {
      pb.seed = to_uint(key, value);
    } else if (key == "tolerance") {
      pb.tolerance = to_real(key, value);
      if (!(pb.tolerance >= 0.0)) throw ProblemError("tolerance must be >= 0");
    } else if (key == "budget") {
      pb.budget = to_uint(key, value);
    } else if (key.rfind("option.", 0) == 0) {
      pb.options[key.substr(7)] = value;
    } else if (key == "model.command") {
      pb.model.command_template = value;
    } else if (key == "model.working_dir") {
      pb.model.working_dir = resolve(base_dir, value);
    } else if (key == "model.output") {
      const auto colon = value.find(':');
      try {
        pb.model.output_mode = output_mode_from_name(trim(value.substr(0, colon)));
      } catch (const std::invalid_argument& e) {
        throw ProblemError(e.what());
      }
      if (colon != std::string::npos) pb.model.output_path = trim(value.substr(colon + 1));
    } else if (key == "model.output_path") {
      pb.model.output_path = value;
    } else if (key == "model.timeout") {
      pb.model.timeout = to_real(key, value);
    } else if (key == "model.reference") {
      pb.model.reference = resolve(base_dir, value);
    } else if (key == "cost.kind") {
      try {
        pb.model.cost.kind = cost_kind_from_name(value);
      } catch (const std::invalid_argument& e) {
        throw ProblemError(e.what());
      }
    } else if (key == "cost.columns") {
      pb.model.cost.columns.clear();
      for (const auto& item : split(value, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 1 && !parts[0].empty())
          pb.model.cost.columns.push_back({parts[0], parts[0]});
        else if (parts.size() == 2 && !parts[0].empty() && !parts[1].empty())
          pb.model.cost.columns.push_back({parts[0], parts[1]});
        else
          throw ProblemError("cost.columns: expected 'model:reference' pairs, got '" + item + "'");
      }
    } else if (key == "cost.command") {
      pb.model.cost.command = value;
    } else if (key == "cost.skip_until") {
      pb.model.cost.skip_until = to_real(key, value);
    } else {
      throw ProblemError("unknown key '" + key + "'");
    }
  }

  if (!have_objective) throw ProblemError("missing 'objective'");
  if (pb.space.empty()) {
    if (pb.kind == ObjectiveKind::benchmark) pb.space = BenchmarkFunction{pb.function, pb.dimension}.default_space();
    else if (pb.kind == ObjectiveKind::period) pb.space = period_space();
    else throw ProblemError("no parameters defined (add 'param = name,min,max' lines)");
  }
  if (pb.kind == ObjectiveKind::benchmark) {
    if (have_dimension && pb.dimension != pb.space.dimension())
      throw ProblemError("dimension " + std::to_string(pb.dimension) + " does not match the " +
                         std::to_string(pb.space.dimension()) + " parameters given");
    pb.dimension = pb.space.dimension();
  }
  if (pb.kind == ObjectiveKind::period && pb.space.dimension() != 4)
    throw ProblemError("period tuning needs exactly 4 parameters");
  if (pb.kind == ObjectiveKind::external) {
    try {
      validate(pb.model, pb.space);
    } catch (const std::invalid_argument& e) {
      throw ProblemError(std::string("model: ") + e.what());
    }
  }
  if (pb.method) resolve_options(*pb.method, pb.options);
  return pb;
}

Problem load_problem(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProblemError("cannot read problem file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str(), path.has_parent_path() ? path.parent_path() : fs::path("."));
}

namespace {

template <class Fn>
void require(const std::string& key, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw ProblemError("option " + key + ": " + e.what());
  }
}

void set_option(OptionsPSO& o, const std::string& k, const std::string& v) {
  if (k == "iterations") o.iterations = to_uint(k, v);
  else if (k == "swarm_size" || k == "N") o.swarm_size = to_uint(k, v);
  else if (k == "phi1") o.phi1 = to_real(k, v);
  else if (k == "phi2") o.phi2 = to_real(k, v);
  else if (k == "chi") o.chi = to_real(k, v);
  else if (k == "neighborhood") require(k, [&] { o.neighborhood = Neighborhood::from_name(v); });
  else throw ProblemError("unknown pso option '" + k + "' (valid: iterations, swarm_size, phi1, phi2, chi, neighborhood)");
}

void set_option(OptionsSAA& o, const std::string& k, const std::string& v) {
  if (k == "t0") o.t0 = to_real(k, v);
  else if (k == "t_min") o.t_min = to_real(k, v);
  else if (k == "alpha") o.alpha = to_real(k, v);
  else if (k == "temperature_length" || k == "L") o.temperature_length = to_uint(k, v);
  else if (k == "distance" || k == "d") o.distance = to_real(k, v);
  else if (k == "neighborhood") require(k, [&] { o.neighborhood = saa_neighborhood_from_name(v); });
  else
    throw ProblemError("unknown saa option '" + k +
                       "' (valid: t0, t_min, alpha, temperature_length, distance, neighborhood)");
}

void set_option(OptionsACOR& o, const std::string& k, const std::string& v) {
  if (k == "archive_size" || k == "k") o.archive_size = to_uint(k, v);
  else if (k == "ants" || k == "m") o.ants = to_uint(k, v);
  else if (k == "q") o.q = to_real(k, v);
  else if (k == "xi") o.xi = to_real(k, v);
  else if (k == "iterations") o.iterations = to_uint(k, v);
  else throw ProblemError("unknown acor option '" + k + "' (valid: archive_size, ants, q, xi, iterations)");
}

void set_option(OptionsEES1& o, const std::string& k, const std::string& v) {
  if (k == "solution_size" || k == "N") o.solution_size = to_uint(k, v);
  else if (k == "mu") o.mu = to_real(k, v);
  else if (k == "rho") o.rho = to_real(k, v);
  else if (k == "kappa") o.kappa = to_real(k, v);
  else if (k == "iterations") o.iterations = to_uint(k, v);
  else if (k == "mutation_scale") o.mutation_scale = to_real(k, v);
  else if (k == "pseudocode_recombination") o.pseudocode_recombination = to_bool(k, v);
  else
    throw ProblemError("unknown ees1 option '" + k +
                       "' (valid: solution_size, mu, rho, kappa, iterations, mutation_scale, "
                       "pseudocode_recombination)");
}

void set_option(OptionsEES2& o, const std::string& k, const std::string& v) {
  if (k == "population" || k == "N") o.population = to_uint(k, v);
  else if (k == "rho") o.rho = to_real(k, v);
  else if (k == "iterations") o.iterations = to_uint(k, v);
  else if (k == "r") o.r = to_real(k, v);
  else throw ProblemError("unknown ees2 option '" + k + "' (valid: population, rho, iterations, r)");
}

}  // namespace

AlgorithmOptions resolve_options(Method method, const std::map<std::string, std::string, std::less<>>& options) {
  AlgorithmOptions out = default_options(method);
  std::visit(
      [&](auto& o) {
        for (const auto& [k, v] : options) set_option(o, k, v);
        require("validation", [&] { o.validate(); });
      },
      out);
  return out;
}

Objective build_objective(const Problem& problem, unsigned jobs) {
  switch (problem.kind) {
    case ObjectiveKind::benchmark: {
      const BenchmarkFunction f{problem.function, problem.space.dimension()};
      return Objective(problem.space, [f](std::span<const double> x) { return f(x); }, problem.tolerance);
    }
    case ObjectiveKind::period: {
      const double target = problem.period_target;
      const PredatorPreySetup setup = default_period_setup(target);
      return Objective(
          problem.space,
          [target, setup](std::span<const double> x) {
            return period_tuning_cost({x[0], x[1], x[2], x[3]}, target, setup);
          },
          problem.tolerance);
    }
    case ObjectiveKind::external: {
      try {
        Objective obj = make_objective(problem.model, problem.space, problem.tolerance);
        obj.set_parallelism(jobs);
        return obj;
      } catch (const std::exception& e) {
        throw SetupError(e.what());
      }
    }
  }
  throw SetupError("unknown objective kind");
}

}  // namespace metaestim::cli
