#include "metaestim/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace metaestim {

ParameterSpace::ParameterSpace(std::initializer_list<ParameterDef> defs) {
  for (const auto& d : defs) add(d);
}

ParameterSpace& ParameterSpace::add(ParameterDef def) {
  if (def.name.empty()) throw std::invalid_argument("parameter name must not be empty");
  if (index_of(def.name)) throw std::invalid_argument("duplicate parameter name '" + def.name + "'");
  if (!(std::isfinite(def.min) && std::isfinite(def.max)) || !(def.min < def.max))
    throw std::invalid_argument("parameter '" + def.name + "' requires finite bounds with min < max");
  params_.push_back(std::move(def));
  return *this;
}

std::optional<std::size_t> ParameterSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (params_[i].name == name) return i;
  return std::nullopt;
}

std::vector<std::string> ParameterSpace::names() const {
  std::vector<std::string> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.name);
  return out;
}

std::vector<double> ParameterSpace::lower() const {
  std::vector<double> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.min);
  return out;
}

std::vector<double> ParameterSpace::upper() const {
  std::vector<double> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.max);
  return out;
}

std::vector<double> ParameterSpace::clamp(std::span<const double> v) const {
  if (v.size() != params_.size())
    throw std::invalid_argument("vector length " + std::to_string(v.size()) + " does not match dimension " +
                                std::to_string(params_.size()));
  std::vector<double> out(v.begin(), v.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], params_[i].min, params_[i].max);
  return out;
}

bool ParameterSpace::contains(std::span<const double> v) const {
  if (v.size() != params_.size()) return false;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] >= params_[i].min && v[i] <= params_[i].max)) return false;
  return true;
}

ParameterSpace add_parameter(ParameterSpace space, ParameterDef def) {
  space.add(std::move(def));
  return space;
}

std::vector<double> clamp(const ParameterSpace& space, std::span<const double> v) { return space.clamp(v); }

Objective::Objective(ParameterSpace space, Evaluator evaluator, double tolerance)
    : Objective(std::move(space),
                ContextEvaluator([f = std::move(evaluator)](std::span<const double> v,
                                                            const EvaluationContext&) { return f(v); }),
                tolerance) {}

Objective::Objective(ParameterSpace space, ContextEvaluator evaluator, double tolerance)
    : space_(std::move(space)), evaluator_(std::move(evaluator)), tolerance_(tolerance) {
  if (space_.empty()) throw std::invalid_argument("objective requires at least one parameter");
  if (!evaluator_) throw std::invalid_argument("objective requires an evaluator");
  set_tolerance(tolerance);
}

void Objective::set_tolerance(double tolerance) {
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  tolerance_ = tolerance;
}

namespace {

struct Outcome {
  double cost = kPenalty;
  std::optional<std::string> failure;
};

Outcome run_one(const ContextEvaluator& f, std::span<const double> v, const EvaluationContext& ctx) {
  try {
    const double c = f(v, ctx);
    if (std::isnan(c)) return {kPenalty, "evaluator returned NaN"};
    if (std::isinf(c)) return {kPenalty, "evaluator returned a non-finite value"};
    return {c, std::nullopt};
  } catch (const std::exception& e) {
    return {kPenalty, std::string(e.what())};
  } catch (...) {
    return {kPenalty, "unknown evaluator failure"};
  }
}

}  // namespace

std::vector<Candidate> Objective::evaluate_candidates(std::span<const std::vector<double>> batch,
                                                      std::uint64_t iteration) {
  for (const auto& v : batch) {
    if (v.size() != space_.dimension())
      throw std::invalid_argument("vector length " + std::to_string(v.size()) + " does not match dimension " +
                                  std::to_string(space_.dimension()));
    if (!space_.contains(v)) throw std::invalid_argument("vector outside the parameter bounds");
  }

  std::size_t count = batch.size();
  if (budget_ != 0) count = std::min(count, budget_ > visited_.size() ? budget_ - visited_.size() : 0);

  const std::uint64_t first_pset = visited_.size() + 1;
  std::vector<Outcome> outcomes(count);
  auto job = [&](std::size_t i) {
    outcomes[i] = run_one(evaluator_, batch[i], EvaluationContext{first_pset + i, iteration});
  };

  const std::size_t workers = std::min<std::size_t>(jobs_, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) job(i);
      });
  }

  std::vector<Candidate> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    Candidate c;
    c.values = batch[i];
    c.iteration = iteration;
    if (i < count) {
      c.fitness = outcomes[i].cost;
      c.pset = first_pset + i;
      visited_.push_back(c);
      if (outcomes[i].failure) failures_.push_back({c.pset, std::move(*outcomes[i].failure)});
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<double> Objective::evaluate(std::span<const std::vector<double>> batch, std::uint64_t iteration) {
  auto cands = evaluate_candidates(batch, iteration);
  std::vector<double> out;
  out.reserve(cands.size());
  for (const auto& c : cands) out.push_back(c.fitness);
  return out;
}

double Objective::evaluate(std::span<const double> v, std::uint64_t iteration) {
  const std::vector<std::vector<double>> one{std::vector<double>(v.begin(), v.end())};
  return evaluate(std::span<const std::vector<double>>(one), iteration).front();
}

void Objective::reset() {
  visited_.clear();
  failures_.clear();
}

bool is_converged(const Objective& obj, double best_fitness) { return obj.is_converged(best_fitness); }

Estimates make_estimates(std::string method, const Objective& obj, std::vector<Candidate> iteration_bests,
                         double wall_time) {
  Estimates est;
  est.method = std::move(method);
  est.visited_space = obj.visited();
  est.failures = obj.failures();
  est.iteration_bests = std::move(iteration_bests);
  if (!est.visited_space.empty()) {
    auto it = std::min_element(est.visited_space.begin(), est.visited_space.end(),
                               [](const Candidate& a, const Candidate& b) { return a.fitness < b.fitness; });
    est.best = *it;
  }
  est.stats.total_evals = est.visited_space.size();
  est.stats.achieved_tolerance = est.best.fitness;
  est.stats.converged = est.best.evaluated() && obj.is_converged(est.best.fitness);
  est.stats.wall_time = wall_time;
  return est;
}

}  // namespace metaestim
