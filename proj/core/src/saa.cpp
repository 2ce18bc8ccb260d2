#include "metaestim/saa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "metaestim/sampling.hpp"
#include "run_support.hpp"

namespace metaestim {

namespace {
constexpr double kGaussianPathProbability = 0.2;
}

SaaNeighborhood saa_neighborhood_from_name(const std::string& name) {
  if (name == "1" || name == "one" || name == "perturb-1") return SaaNeighborhood::perturb_one;
  if (name == "half" || name == "h" || name == "perturb-half") return SaaNeighborhood::perturb_half;
  if (name == "all" || name == "n" || name == "perturb-all") return SaaNeighborhood::perturb_all;
  throw std::invalid_argument("unknown saa neighborhood '" + name + "' (expected perturb-1, perturb-half or perturb-all)");
}

std::string to_string(SaaNeighborhood mode) {
  switch (mode) {
    case SaaNeighborhood::perturb_one: return "perturb-1";
    case SaaNeighborhood::perturb_half: return "perturb-half";
    case SaaNeighborhood::perturb_all: return "perturb-all";
  }
  return "perturb-1";
}

void OptionsSAA::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("saa: alpha must lie in (0, 1)");
  if (!(distance > 0.0 && distance <= 1.0)) throw std::invalid_argument("saa: distance must lie in (0, 1]");
  if (!(t_min > 0.0 && t_min < t0)) throw std::invalid_argument("saa: requires 0 < t_min < t0");
  if (temperature_length < 1) throw std::invalid_argument("saa: temperature_length must be >= 1");
}

std::size_t saa_neighborhood_size(SaaNeighborhood mode, std::size_t dimension) {
  if (dimension < 1) throw std::invalid_argument("saa: dimension must be >= 1");
  switch (mode) {
    case SaaNeighborhood::perturb_one: return 1;
    case SaaNeighborhood::perturb_half: return std::max<std::size_t>(1, dimension / 2);
    case SaaNeighborhood::perturb_all: return dimension;
  }
  return 1;
}

double saa_acceptance_probability(double delta, double temperature) {
  if (!(delta > 0.0)) return 1.0;
  return std::exp(-delta / temperature);
}

bool saa_accept(double delta, double temperature, Rng& rng) {
  if (!(delta > 0.0)) return true;
  return uniform(rng) < saa_acceptance_probability(delta, temperature);
}

double saa_gaussian_move(const ParameterDef& def, double distance, double z) {
  const double spread = distance * (def.max - def.min);
  const double mid = 0.5 * (def.min + def.max);
  return spread * z + mid;
}

double saa_multiplicative_move(double s, double u) { return s + s * u; }

std::vector<double> saa_propose(std::span<const double> current, const ParameterSpace& space, double distance,
                                std::span<const std::size_t> which, Rng& rng) {
  if (which.empty()) throw std::invalid_argument("saa_propose: no dimension selected");
  std::vector<double> next(current.begin(), current.end());
  for (const std::size_t j : which) {
    if (uniform(rng) < kGaussianPathProbability)
      next[j] = saa_gaussian_move(space[j], distance, standard_normal(rng));
    else
      next[j] = saa_multiplicative_move(next[j], uniform(rng, -1.0, 1.0));
  }
  return space.clamp(next);
}

Estimates saa(Objective& obj, const OptionsSAA& options, Rng& rng) {
  options.validate();
  obj.reset();
  detail::Stopwatch clock;
  const ParameterSpace& space = obj.space();
  const std::size_t dim = space.dimension();
  const std::size_t moved = saa_neighborhood_size(options.neighborhood, dim);

  const SampleMatrix start = uniform_sample(space, 1, rng);
  Candidate current = obj.evaluate_candidates(start, 0).front();
  Candidate best = current;
  std::vector<Candidate> trace{best};

  std::vector<std::size_t> dims(dim);
  std::iota(dims.begin(), dims.end(), std::size_t{0});

  double temperature = options.t0;
  for (std::uint64_t level = 1; temperature > options.t_min && !detail::should_stop(obj, best); ++level) {
    for (std::size_t l = 0; l < options.temperature_length && !detail::should_stop(obj, best); ++l) {
      std::shuffle(dims.begin(), dims.end(), rng);
      const std::span<const std::size_t> which(dims.data(), moved);
      const SampleMatrix proposal{saa_propose(current.values, space, options.distance, which, rng)};
      const Candidate next = obj.evaluate_candidates(proposal, level).front();
      if (!next.evaluated()) break;
      if (saa_accept(next.fitness - current.fitness, temperature, rng)) current = next;
      if (current.fitness < best.fitness) best = current;
    }
    trace.push_back(best);
    temperature *= options.alpha;
  }

  return make_estimates("saa", obj, std::move(trace), clock.seconds());
}

}  // namespace metaestim
