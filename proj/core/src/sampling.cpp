#include "metaestim/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace metaestim {

namespace {

void check(const Box& box, std::size_t n) {
  if (n == 0) throw std::invalid_argument("sample size must be >= 1");
  if (box.lower.size() != box.upper.size() || box.lower.empty())
    throw std::invalid_argument("sampling box needs matching, non-empty bounds");
  for (std::size_t j = 0; j < box.lower.size(); ++j)
    if (!(box.lower[j] <= box.upper[j])) throw std::invalid_argument("sampling box has lower > upper");
}

}  // namespace

double stratum_edge(double lo, double hi, std::size_t n, std::size_t k) {
  if (k >= n) return hi;
  return lo + (hi - lo) * (static_cast<double>(k) / static_cast<double>(n));
}

SampleMatrix lhs(const Box& box, std::size_t n, Rng& rng) {
  check(box, n);
  const std::size_t d = box.dimension();
  SampleMatrix out(n, std::vector<double>(d));
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < d; ++j) {
    const double lo = box.lower[j];
    const double hi = box.upper[j];
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = stratum_edge(lo, hi, n, perm[i]);
      const double b = stratum_edge(lo, hi, n, perm[i] + 1);
      double x = a + uniform(rng) * (b - a);
      // rounding may push x onto the next stratum's edge
      if (x >= b && b > a) x = std::nextafter(b, a);
      out[i][j] = x;
    }
  }
  return out;
}

SampleMatrix lhs(const ParameterSpace& space, std::size_t n, Rng& rng) { return lhs(Box::of(space), n, rng); }

SampleMatrix uniform_sample(const Box& box, std::size_t n, Rng& rng) {
  check(box, n);
  SampleMatrix out(n, std::vector<double>(box.dimension()));
  for (auto& row : out)
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double x = box.lower[j] + uniform(rng) * (box.upper[j] - box.lower[j]);
      row[j] = std::min(x, box.upper[j]);
    }
  return out;
}

SampleMatrix uniform_sample(const ParameterSpace& space, std::size_t n, Rng& rng) {
  return uniform_sample(Box::of(space), n, rng);
}

}  // namespace metaestim
