#ifndef METAESTIM_SAA_HPP
#define METAESTIM_SAA_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "metaestim/core.hpp"
#include "metaestim/random.hpp"

namespace metaestim {

/// How many dimensions a neighbour move perturbs.
enum class SaaNeighborhood { perturb_one, perturb_half, perturb_all };

SaaNeighborhood saa_neighborhood_from_name(const std::string& name);
std::string to_string(SaaNeighborhood mode);

struct OptionsSAA {
  double t0 = 1.0;
  double t_min = 1e-4;
  double alpha = 0.9;
  std::size_t temperature_length = 10;
  /// Neighbourhood distance as a fraction of each parameter's range.
  double distance = 0.5;
  SaaNeighborhood neighborhood = SaaNeighborhood::perturb_one;

  void validate() const;
};

/// 1, max(1, d/2) or d.
std::size_t saa_neighborhood_size(SaaNeighborhood mode, std::size_t dimension);

/// Probability of accepting a move that worsens the cost by delta at
/// temperature T: 1 for delta <= 0, exp(-delta / T) otherwise.
double saa_acceptance_probability(double delta, double temperature);
bool saa_accept(double delta, double temperature, Rng& rng);

/// Gaussian path: the midpoint of the range plus distance * range * z.
double saa_gaussian_move(const ParameterDef& def, double distance, double z);
/// Multiplicative path: s + s * u with u in [-1, 1].
double saa_multiplicative_move(double s, double u);

/// Perturbs the listed (0-based) dimensions of current, each through the
/// Gaussian path with probability 0.2 and the multiplicative path otherwise;
/// the result is clamped to the bounds.
std::vector<double> saa_propose(std::span<const double> current, const ParameterSpace& space, double distance,
                                std::span<const std::size_t> which, Rng& rng);

Estimates saa(Objective& obj, const OptionsSAA& options, Rng& rng);

}  // namespace metaestim

#endif  // METAESTIM_SAA_HPP
