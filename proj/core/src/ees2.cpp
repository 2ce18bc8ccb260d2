#include "metaestim/ees2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "run_support.hpp"

namespace metaestim {

namespace {
constexpr double kAdditiveBranchProbability = 0.2;
constexpr double kMultiplicativeSupport = 3.0;
}  // namespace

std::size_t OptionsEES2::selected() const {
  return static_cast<std::size_t>(std::trunc(static_cast<double>(population) * rho));
}

void OptionsEES2::validate() const {
  if (population < 1) throw std::invalid_argument("ees2: population must be >= 1");
  if (iterations < 1) throw std::invalid_argument("ees2: iterations must be >= 1");
  const std::size_t k = selected();
  if (k < 1 || k > population) throw std::invalid_argument("ees2: trunc(population * rho) must lie in [1, population]");
  if (!(r > 0.0)) throw std::invalid_argument("ees2: r must be > 0");
}

Ees2Midpoints ees2_midpoints(std::span<const std::vector<double>> rows, double r) {
  if (rows.empty()) throw std::invalid_argument("ees2: no rows selected");
  const std::size_t d = rows.front().size();
  Ees2Midpoints out{std::vector<double>(d), std::vector<double>(d)};
  for (std::size_t j = 0; j < d; ++j) {
    double lo = rows.front()[j];
    double hi = lo;
    for (const auto& row : rows) {
      lo = std::min(lo, row[j]);
      hi = std::max(hi, row[j]);
    }
    const double prod = lo * hi;
    if (prod < 0.0)
      out.m1[j] = 0.5 * (lo + hi);
    else
      out.m1[j] = std::copysign(std::pow(prod, r), lo + hi);
    out.m2[j] = 0.5 * std::fabs(lo + hi);
  }
  return out;
}

Box ees2_next_box(std::span<const std::vector<double>> rows, const ParameterSpace& space, double r, Rng& rng) {
  const Ees2Midpoints mid = ees2_midpoints(rows, r);
  const std::size_t d = space.dimension();
  Box box{std::vector<double>(d), std::vector<double>(d)};
  const bool additive = uniform(rng) < kAdditiveBranchProbability;
  for (std::size_t j = 0; j < d; ++j) {
    double lo = 0.0;
    double hi = 0.0;
    if (additive) {
      lo = mid.m1[j] - mid.m2[j] - uniform(rng);
      hi = mid.m1[j] + mid.m2[j] + uniform(rng);
    } else {
      lo = mid.m1[j] - mid.m2[j] * uniform(rng, 0.0, kMultiplicativeSupport);
      hi = mid.m1[j] + mid.m2[j] * uniform(rng, 0.0, kMultiplicativeSupport);
    }
    lo = std::max(lo, space[j].min);
    hi = std::min(hi, space[j].max);
    if (lo > hi) {
      lo = rows.front()[j];
      hi = lo;
      for (const auto& row : rows) {
        lo = std::min(lo, row[j]);
        hi = std::max(hi, row[j]);
      }
    }
    box.lower[j] = lo;
    box.upper[j] = hi;
  }
  return box;
}

Estimates ees2(Objective& obj, const OptionsEES2& options, Rng& rng) {
  options.validate();
  obj.reset();
  detail::Stopwatch clock;
  const ParameterSpace& space = obj.space();
  const std::size_t k = options.selected();

  std::vector<Candidate> solution = obj.evaluate_candidates(lhs(space, options.population, rng), 0);
  detail::sort_by_fitness(solution);
  std::vector<Candidate> trace{solution.front()};

  std::vector<std::vector<double>> best_rows;
  for (std::size_t it = 1; it <= options.iterations && !detail::should_stop(obj, solution.front()); ++it) {
    best_rows.clear();
    for (std::size_t i = 0; i < std::min(k, solution.size()); ++i) best_rows.push_back(solution[i].values);
    const Box box = ees2_next_box(best_rows, space, options.r, rng);
    const std::vector<Candidate> fresh = obj.evaluate_candidates(lhs(box, options.population, rng), it);
    for (const auto& c : fresh)
      if (c.evaluated()) solution.push_back(c);
    detail::sort_by_fitness(solution);
    trace.push_back(solution.front());
  }

  return make_estimates("ees2", obj, std::move(trace), clock.seconds());
}

}  // namespace metaestim
