#ifndef METAESTIM_SAMPLING_HPP
#define METAESTIM_SAMPLING_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "metaestim/core.hpp"
#include "metaestim/random.hpp"

namespace metaestim {

/// N rows of d-dimensional points; row order is the order of generation.
using SampleMatrix = std::vector<std::vector<double>>;

/// Per-dimension sampling box. Unlike ParameterSpace it allows lo == hi,
/// which collapses that dimension to a point.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box of(const ParameterSpace& space) { return {space.lower(), space.upper()}; }
  std::size_t dimension() const noexcept { return lower.size(); }
};

/// Lower edge of stratum k when [lo, hi] is cut into n equal strata.
/// Sampling and the stratification checks share this definition.
double stratum_edge(double lo, double hi, std::size_t n, std::size_t k);

/// Latin hypercube sample: every dimension is cut into n equal strata and
/// each stratum holds exactly one point, placed uniformly inside it. Columns
/// are permuted independently.
SampleMatrix lhs(const ParameterSpace& space, std::size_t n, Rng& rng);
SampleMatrix lhs(const Box& box, std::size_t n, Rng& rng);

/// n independent uniform points in the box.
SampleMatrix uniform_sample(const ParameterSpace& space, std::size_t n, Rng& rng);
SampleMatrix uniform_sample(const Box& box, std::size_t n, Rng& rng);

}  // namespace metaestim

#endif  // METAESTIM_SAMPLING_HPP
