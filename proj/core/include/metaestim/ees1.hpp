#ifndef METAESTIM_EES1_HPP
#define METAESTIM_EES1_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "metaestim/core.hpp"
#include "metaestim/random.hpp"

namespace metaestim {

/// Evolutionary strategy driven by the geometric-mean centroid of a set of
/// fitness-biased mates.
struct OptionsEES1 {
  /// Population (solution) size.
  std::size_t solution_size = 10;
  /// Mating selection strength: the rank-r row is picked with probability mu^r.
  double mu = 0.3;
  /// Per-component mutation probability.
  double rho = 0.01;
  /// Selective pressure: a worse offspring replaces its parent with probability 1 - kappa.
  double kappa = 0.2;
  std::size_t iterations = 50;
  /// Half-width of the additive mutation, as a fraction of the parameter range.
  double mutation_scale = 0.1;
  /// Use (x + x + G w) / 2 for the weighted recombination instead of (x + (x + G) w) / 2.
  bool pseudocode_recombination = false;

  void validate() const;
};

double ees1_selection_weight(double mu, std::size_t rank);

/// Indices (into a population sorted ascending by fitness) of the mates:
/// rows are scanned from the top and taken with probability mu^rank until
/// count rows are chosen, rescanning as often as needed. A row may be taken
/// more than once.
std::vector<std::size_t> ees1_select_mates(std::size_t population, std::size_t count, double mu, Rng& rng);

/// Component-wise geometric mean. A dimension whose values share a sign uses
/// the sign-preserving geometric mean of magnitudes; mixed strict signs fall
/// back to the arithmetic mean.
std::vector<double> geometric_centroid(std::span<const std::vector<double>> rows);
double signed_geometric_mean(std::span<const double> values);

Estimates ees1(Objective& obj, const OptionsEES1& options, Rng& rng);

}  // namespace metaestim

#endif  // METAESTIM_EES1_HPP
