#ifndef METAESTIM_EES2_HPP
#define METAESTIM_EES2_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "metaestim/core.hpp"
#include "metaestim/random.hpp"
#include "metaestim/sampling.hpp"

namespace metaestim {

/// Range-shrinking mapper: each iteration draws a fresh Latin hypercube
/// over a box built around the best rows found so far.
struct OptionsEES2 {
  std::size_t population = 20;
  /// Fraction of the population whose spread defines the next box.
  double rho = 0.25;
  std::size_t iterations = 30;
  /// Exponent of the geometric midpoint.
  double r = 0.5;

  std::size_t selected() const;
  void validate() const;
};

/// Per-dimension statistics of the selected rows: m1 = sign-preserving
/// (min * max)^r, falling back to (min + max) / 2 when min * max < 0, and
/// m2 = |min + max| / 2.
struct Ees2Midpoints {
  std::vector<double> m1;
  std::vector<double> m2;
};
Ees2Midpoints ees2_midpoints(std::span<const std::vector<double>> rows, double r);

/// Next sampling box, intersected with the original bounds. With probability
/// 1/5 the box is [m1 - m2 - U, m1 + m2 + U] (U ~ U(0,1), drawn per bound),
/// otherwise [m1 - m2 U', m1 + m2 U''] with U', U'' ~ U(0,3). A dimension whose
/// intersection is empty falls back to the span of the selected rows.
Box ees2_next_box(std::span<const std::vector<double>> rows, const ParameterSpace& space, double r, Rng& rng);

Estimates ees2(Objective& obj, const OptionsEES2& options, Rng& rng);

}  // namespace metaestim

#endif  // METAESTIM_EES2_HPP
