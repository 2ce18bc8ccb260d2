#include "metaestim/pso.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "metaestim/sampling.hpp"
#include "run_support.hpp"

namespace metaestim {

namespace {

void check_index(std::size_t i, std::size_t n) {
  if (n == 0 || i < 1 || i > n)
    throw std::invalid_argument("particle index " + std::to_string(i) + " outside 1.." + std::to_string(n));
}

void push_unique(std::vector<std::size_t>& out, std::size_t v) {
  if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

}  // namespace

std::vector<std::size_t> pso_neighborhood_k2(std::size_t i, std::size_t n) {
  check_index(i, n);
  if (n == 1) return {1};
  std::vector<std::size_t> out;
  push_unique(out, i == 1 ? n : i - 1);
  push_unique(out, i == n ? 1 : i + 1);
  return out;
}

std::vector<std::size_t> pso_neighborhood_k4(std::size_t i, std::size_t n) {
  check_index(i, n);
  const auto rows = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  const std::size_t cols = (n + rows - 1) / rows;
  const std::size_t idx = i - 1;
  const std::size_t r0 = idx % rows;
  const std::size_t c0 = idx / rows;

  auto walk = [&](long dr, long dc) {
    long r = static_cast<long>(r0);
    long c = static_cast<long>(c0);
    const auto R = static_cast<long>(rows);
    const auto C = static_cast<long>(cols);
    for (;;) {
      r = ((r + dr) % R + R) % R;
      c = ((c + dc) % C + C) % C;
      const auto cell = static_cast<std::size_t>(c * R + r);
      if (cell < n) return cell + 1;
    }
  };

  std::vector<std::size_t> out;
  for (auto [dr, dc] : {std::pair{-1L, 0L}, std::pair{1L, 0L}, std::pair{0L, -1L}, std::pair{0L, 1L}}) {
    const std::size_t j = walk(dr, dc);
    if (j != i) push_unique(out, j);
  }
  if (out.empty()) out.push_back(i);
  return out;
}

std::vector<std::size_t> pso_neighborhood_kn(std::size_t i, std::size_t n) {
  check_index(i, n);
  std::vector<std::size_t> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = k + 1;
  return out;
}

Neighborhood Neighborhood::from_name(const std::string& name) {
  if (name == "k2") return k2();
  if (name == "k4") return k4();
  if (name == "kn") return kn();
  throw std::invalid_argument("unknown PSO neighborhood '" + name + "' (expected k2, k4 or kn)");
}

void OptionsPSO::validate() const {
  if (iterations < 1) throw std::invalid_argument("pso: iterations must be >= 1");
  if (swarm_size < 2) throw std::invalid_argument("pso: swarm_size must be >= 2");
  if (!(phi1 + phi2 > 4.0)) throw std::invalid_argument("pso: constriction requires phi1 + phi2 > 4");
  if (!(chi > 0.0 && chi <= 1.0)) throw std::invalid_argument("pso: chi must lie in (0, 1]");
  if (!neighborhood.fn) throw std::invalid_argument("pso: neighborhood function missing");
}

void pso_velocity_update(std::span<double> velocity, std::span<const double> position, std::span<const double> pbest,
                         std::span<const double> nbest, const OptionsPSO& options, Rng& rng) {
  for (std::size_t d = 0; d < velocity.size(); ++d) {
    const double u1 = uniform(rng);
    const double u2 = uniform(rng);
    velocity[d] = options.chi * (velocity[d] + options.phi1 * u1 * (pbest[d] - position[d]) +
                                 options.phi2 * u2 * (nbest[d] - position[d]));
  }
}

Estimates pso(Objective& obj, const OptionsPSO& options, Rng& rng) {
  options.validate();
  obj.reset();
  detail::Stopwatch clock;
  const ParameterSpace& space = obj.space();
  const std::size_t n = options.swarm_size;
  const std::size_t dim = space.dimension();

  SampleMatrix x = uniform_sample(space, n, rng);
  SampleMatrix v(n, std::vector<double>(dim));
  {
    // half the distance to another random point of the box
    const SampleMatrix target = uniform_sample(space, n, rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < dim; ++d) v[i][d] = 0.5 * (target[i][d] - x[i][d]);
  }

  std::vector<Candidate> pbest = obj.evaluate_candidates(x, 0);
  Candidate gbest = *std::min_element(pbest.begin(), pbest.end(), detail::fitter);
  std::vector<Candidate> trace{gbest};

  std::vector<std::vector<std::size_t>> informants(n);
  for (std::size_t i = 0; i < n; ++i) {
    informants[i] = options.neighborhood.fn(i + 1, n);
    for (auto j : informants[i])
      if (j < 1 || j > n) throw std::out_of_range("pso: neighborhood returned index outside 1..N");
  }

  for (std::size_t it = 1; it <= options.iterations && !detail::should_stop(obj, gbest); ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      const Candidate* nb = &pbest[informants[i].front() - 1];
      for (auto j : informants[i])
        if (pbest[j - 1].fitness < nb->fitness) nb = &pbest[j - 1];
      pso_velocity_update(v[i], x[i], pbest[i].values, nb->values, options, rng);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < dim; ++d) {
        const double next = x[i][d] + v[i][d];
        const double lo = space[d].min;
        const double hi = space[d].max;
        if (next < lo || next > hi) {
          x[i][d] = std::clamp(next, lo, hi);
          v[i][d] = 0.0;
        } else {
          x[i][d] = next;
        }
      }

    const std::vector<Candidate> evaluated = obj.evaluate_candidates(x, it);
    for (std::size_t i = 0; i < n; ++i) {
      if (evaluated[i].fitness < pbest[i].fitness) pbest[i] = evaluated[i];
      if (pbest[i].fitness < gbest.fitness) gbest = pbest[i];
    }
    trace.push_back(gbest);
  }

  return make_estimates("pso", obj, std::move(trace), clock.seconds());
}

}  // namespace metaestim
