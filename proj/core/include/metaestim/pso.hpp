#ifndef METAESTIM_PSO_HPP
#define METAESTIM_PSO_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "metaestim/core.hpp"
#include "metaestim/random.hpp"

namespace metaestim {

/// Maps (particle index i, swarm size n), both 1-based, to the 1-based
/// indices of i's informants.
using NeighborhoodFn = std::function<std::vector<std::size_t>(std::size_t, std::size_t)>;

/// Ring topology: {i-1, i+1} with wraparound, duplicates collapsed.
std::vector<std::size_t> pso_neighborhood_k2(std::size_t i, std::size_t n);

/// von Neumann topology on the column-major grid with ceil(sqrt(n)) rows.
/// Returns the up, down, left and right toroidal neighbours; a walk that
/// lands on an empty cell of the ragged last column keeps going in the same
/// direction. Duplicates and i itself are dropped.
std::vector<std::size_t> pso_neighborhood_k4(std::size_t i, std::size_t n);

/// Complete graph {1..n}.
std::vector<std::size_t> pso_neighborhood_kn(std::size_t i, std::size_t n);

struct Neighborhood {
  std::string name;
  NeighborhoodFn fn;

  static Neighborhood k2() { return {"k2", pso_neighborhood_k2}; }
  static Neighborhood k4() { return {"k4", pso_neighborhood_k4}; }
  static Neighborhood kn() { return {"kn", pso_neighborhood_kn}; }
  static Neighborhood custom(NeighborhoodFn fn) { return {"custom", std::move(fn)}; }
  /// "k2", "k4" or "kn"; throws std::invalid_argument otherwise.
  static Neighborhood from_name(const std::string& name);
};

struct OptionsPSO {
  std::size_t iterations = 1000;
  std::size_t swarm_size = 16;
  double phi1 = 2.05;
  double phi2 = 2.05;
  double chi = 0.72984;
  Neighborhood neighborhood = Neighborhood::kn();

  void validate() const;
};

/// Constriction velocity update for one particle:
/// v <- chi * (v + phi1 U1 (pbest - x) + phi2 U2 (nbest - x)).
void pso_velocity_update(std::span<double> velocity, std::span<const double> position, std::span<const double> pbest,
                         std::span<const double> nbest, const OptionsPSO& options, Rng& rng);

Estimates pso(Objective& obj, const OptionsPSO& options, Rng& rng);

}  // namespace metaestim

#endif  // METAESTIM_PSO_HPP
