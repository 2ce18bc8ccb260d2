#ifndef METAESTIM_SRC_RUN_SUPPORT_HPP
#define METAESTIM_SRC_RUN_SUPPORT_HPP

#include <algorithm>
#include <chrono>
#include <vector>

#include "metaestim/core.hpp"

namespace metaestim::detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline bool fitter(const Candidate& a, const Candidate& b) { return a.fitness < b.fitness; }

/// Stable ascending sort by fitness.
inline void sort_by_fitness(std::vector<Candidate>& pop) { std::stable_sort(pop.begin(), pop.end(), fitter); }

/// Stop once the best fitness meets the tolerance or the budget is used up.
inline bool should_stop(const Objective& obj, const Candidate& best) {
  return (best.evaluated() && obj.is_converged(best.fitness)) || obj.budget_exhausted();
}

}  // namespace metaestim::detail

#endif  // METAESTIM_SRC_RUN_SUPPORT_HPP
