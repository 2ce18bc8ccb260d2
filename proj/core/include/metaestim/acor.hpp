#ifndef METAESTIM_ACOR_HPP
#define METAESTIM_ACOR_HPP

#include <cstddef>
#include <vector>

#include "metaestim/core.hpp"
#include "metaestim/random.hpp"

namespace metaestim {

struct OptionsACOR {
  /// Solution archive size k.
  std::size_t archive_size = 64;
  /// Ants (new solutions) per iteration m.
  std::size_t ants = 64;
  /// Locality of the rank weighting.
  double q = 0.2;
  /// Deviation-to-distance ratio of the sampling kernel.
  double xi = 0.85;
  std::size_t iterations = 500;

  void validate() const;
};

/// Rank weights w_l = exp(-(l-1)^2 / (2 q^2 k^2)) / (q k sqrt(2 pi)), l = 1..k.
std::vector<double> acor_weights(std::size_t k, double q);

/// Archive rows sorted ascending by fitness, with their rank weights.
struct AcorArchive {
  std::vector<Candidate> rows;
  std::vector<double> weights;

  AcorArchive() = default;
  AcorArchive(std::vector<Candidate> rows, double q);

  /// Keeps the best rows.size() of the current rows plus the newcomers.
  void merge(const std::vector<Candidate>& newcomers);
  const Candidate& head() const { return rows.front(); }
};

/// Kernel standard deviation for guide row l in dimension j:
/// xi * sum_e |s_e[j] - s_l[j]| / (k - 1); zero when k == 1.
double acor_deviation(const AcorArchive& archive, std::size_t guide, std::size_t j, double xi);

/// Samples a guide row by weight, then each dimension from a normal centred
/// on the guide with acor_deviation; the result is clamped to the bounds.
std::vector<double> acor_propose(const AcorArchive& archive, const ParameterSpace& space, double xi, Rng& rng);

Estimates acor(Objective& obj, const OptionsACOR& options, Rng& rng);

}  // namespace metaestim

#endif  // METAESTIM_ACOR_HPP
