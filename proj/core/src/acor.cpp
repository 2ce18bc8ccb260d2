#include "metaestim/acor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "metaestim/sampling.hpp"
#include "run_support.hpp"

namespace metaestim {

void OptionsACOR::validate() const {
  if (archive_size < 2) throw std::invalid_argument("acor: archive_size must be >= 2");
  if (ants < 1) throw std::invalid_argument("acor: ants must be >= 1");
  if (!(q > 0.0)) throw std::invalid_argument("acor: q must be > 0");
  if (!(xi > 0.0)) throw std::invalid_argument("acor: xi must be > 0");
  if (iterations < 1) throw std::invalid_argument("acor: iterations must be >= 1");
}

std::vector<double> acor_weights(std::size_t k, double q) {
  if (k < 1) throw std::invalid_argument("acor_weights: k must be >= 1");
  if (!(q > 0.0)) throw std::invalid_argument("acor_weights: q must be > 0");
  const double qk = q * static_cast<double>(k);
  const double scale = 1.0 / (qk * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> w(k);
  for (std::size_t l = 0; l < k; ++l) {
    const double r = static_cast<double>(l);
    w[l] = scale * std::exp(-(r * r) / (2.0 * qk * qk));
  }
  return w;
}

AcorArchive::AcorArchive(std::vector<Candidate> r, double q) : rows(std::move(r)) {
  detail::sort_by_fitness(rows);
  weights = acor_weights(rows.size(), q);
}

void AcorArchive::merge(const std::vector<Candidate>& newcomers) {
  const std::size_t k = rows.size();
  rows.insert(rows.end(), newcomers.begin(), newcomers.end());
  detail::sort_by_fitness(rows);
  rows.resize(k);
}

double acor_deviation(const AcorArchive& archive, std::size_t guide, std::size_t j, double xi) {
  const std::size_t k = archive.rows.size();
  if (k < 2) return 0.0;
  const double centre = archive.rows[guide].values[j];
  double spread = 0.0;
  for (const auto& row : archive.rows) spread += std::fabs(row.values[j] - centre);
  return xi * spread / static_cast<double>(k - 1);
}

std::vector<double> acor_propose(const AcorArchive& archive, const ParameterSpace& space, double xi, Rng& rng) {
  if (archive.rows.empty()) throw std::invalid_argument("acor_propose: empty archive");
  std::discrete_distribution<std::size_t> pick(archive.weights.begin(), archive.weights.end());
  const std::size_t guide = pick(rng);
  const auto& centre = archive.rows[guide].values;
  std::vector<double> out(centre.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = normal(rng, centre[j], acor_deviation(archive, guide, j, xi));
  return space.clamp(out);
}

Estimates acor(Objective& obj, const OptionsACOR& options, Rng& rng) {
  options.validate();
  obj.reset();
  detail::Stopwatch clock;
  const ParameterSpace& space = obj.space();

  AcorArchive archive(obj.evaluate_candidates(lhs(space, options.archive_size, rng), 0), options.q);
  std::vector<Candidate> trace{archive.head()};

  for (std::size_t it = 1; it <= options.iterations && !detail::should_stop(obj, archive.head()); ++it) {
    SampleMatrix batch;
    batch.reserve(options.ants);
    for (std::size_t a = 0; a < options.ants; ++a) batch.push_back(acor_propose(archive, space, options.xi, rng));
    archive.merge(obj.evaluate_candidates(batch, it));
    trace.push_back(archive.head());
  }

  return make_estimates("acor", obj, std::move(trace), clock.seconds());
}

}  // namespace metaestim
