#include "metaestim/ees1.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "metaestim/sampling.hpp"
#include "run_support.hpp"

namespace metaestim {

namespace {
constexpr double kWeightedRecombinationProbability = 0.2;
}

void OptionsEES1::validate() const {
  if (solution_size < 2) throw std::invalid_argument("ees1: solution_size must be >= 2");
  if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("ees1: mu must lie in (0, 1]");
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("ees1: rho must lie in [0, 1]");
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::invalid_argument("ees1: kappa must lie in [0, 1]");
  if (iterations < 1) throw std::invalid_argument("ees1: iterations must be >= 1");
  if (!(mutation_scale >= 0.0)) throw std::invalid_argument("ees1: mutation_scale must be >= 0");
}

double ees1_selection_weight(double mu, std::size_t rank) {
  if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("ees1: mu must lie in (0, 1]");
  if (rank < 1) throw std::invalid_argument("ees1: rank is 1-based");
  return std::pow(mu, static_cast<double>(rank));
}

std::vector<std::size_t> ees1_select_mates(std::size_t population, std::size_t count, double mu, Rng& rng) {
  if (population == 0) throw std::invalid_argument("ees1: empty population");
  std::vector<std::size_t> mates;
  mates.reserve(count);
  while (mates.size() < count) {
    for (std::size_t r = 0; r < population && mates.size() < count; ++r)
      if (uniform(rng) < ees1_selection_weight(mu, r + 1)) mates.push_back(r);
  }
  return mates;
}

double signed_geometric_mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("geometric mean of nothing");
  bool any_pos = false;
  bool any_neg = false;
  bool any_zero = false;
  for (const double v : values) {
    any_pos |= v > 0.0;
    any_neg |= v < 0.0;
    any_zero |= v == 0.0;
  }
  const auto n = static_cast<double>(values.size());
  if (any_pos && any_neg) {
    double s = 0.0;
    for (const double v : values) s += v;
    return s / n;
  }
  if (any_zero) return 0.0;
  double logs = 0.0;
  for (const double v : values) logs += std::log(std::fabs(v));
  const double g = std::exp(logs / n);
  return any_neg ? -g : g;
}

std::vector<double> geometric_centroid(std::span<const std::vector<double>> rows) {
  if (rows.empty()) throw std::invalid_argument("centroid of no rows");
  const std::size_t d = rows.front().size();
  std::vector<double> out(d);
  std::vector<double> column(rows.size());
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i][j];
    out[j] = signed_geometric_mean(column);
  }
  return out;
}

Estimates ees1(Objective& obj, const OptionsEES1& options, Rng& rng) {
  options.validate();
  obj.reset();
  detail::Stopwatch clock;
  const ParameterSpace& space = obj.space();
  const std::size_t n = options.solution_size;
  const std::size_t dim = space.dimension();
  const std::size_t mate_count = std::max<std::size_t>(1, n / 2);

  std::vector<Candidate> pop = obj.evaluate_candidates(lhs(space, n, rng), 0);
  detail::sort_by_fitness(pop);
  std::vector<Candidate> trace{pop.front()};

  for (std::size_t it = 1; it <= options.iterations && !detail::should_stop(obj, pop.front()); ++it) {
    std::vector<std::vector<double>> mates;
    mates.reserve(mate_count);
    for (const std::size_t r : ees1_select_mates(n, mate_count, options.mu, rng)) mates.push_back(pop[r].values);
    const std::vector<double> centroid = geometric_centroid(mates);

    double total = 0.0;
    for (const auto& c : pop) total += c.fitness;
    const bool usable_total = std::isfinite(total) && total != 0.0;

    SampleMatrix offspring(n, std::vector<double>(dim));
    for (std::size_t k = 0; k < n; ++k) {
      const auto& x = pop[k].values;
      if (uniform(rng) < kWeightedRecombinationProbability) {
        const double w = usable_total ? pop[k].fitness / total : 1.0 / static_cast<double>(n);
        for (std::size_t j = 0; j < dim; ++j)
          offspring[k][j] = options.pseudocode_recombination ? (x[j] + x[j] + centroid[j] * w) / 2.0
                                                             : (x[j] + (x[j] + centroid[j]) * w) / 2.0;
      } else {
        for (std::size_t j = 0; j < dim; ++j) offspring[k][j] = (x[j] + centroid[j]) / 2.0;
      }
      for (std::size_t j = 0; j < dim; ++j)
        if (uniform(rng) < options.rho) {
          const double half = options.mutation_scale * (space[j].max - space[j].min);
          offspring[k][j] += uniform(rng, -half, half);
        }
      offspring[k] = space.clamp(offspring[k]);
    }

    const std::vector<Candidate> evaluated = obj.evaluate_candidates(offspring, it);
    for (std::size_t k = 0; k < n; ++k) {
      if (!evaluated[k].evaluated()) continue;
      if (evaluated[k].fitness < pop[k].fitness) {
        pop[k] = evaluated[k];
      } else if (k > 0 && uniform(rng) < 1.0 - options.kappa) {
        pop[k] = evaluated[k];
      }
    }
    detail::sort_by_fitness(pop);
    trace.push_back(pop.front());
  }

  return make_estimates("ees1", obj, std::move(trace), clock.seconds());
}

}  // namespace metaestim
