#include "metaestim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "metaestim/core.hpp"

namespace metaestim {

void TimeSeries::add_channel(std::string name, std::vector<double> values) {
  if (values.size() != t_.size())
    throw std::invalid_argument("channel '" + name + "' has " + std::to_string(values.size()) + " samples, expected " +
                                std::to_string(t_.size()));
  if (has_channel(name)) throw std::invalid_argument("duplicate channel '" + name + "'");
  channels_.emplace_back(std::move(name), std::move(values));
}

bool TimeSeries::has_channel(std::string_view name) const {
  return std::any_of(channels_.begin(), channels_.end(), [&](const auto& c) { return c.first == name; });
}

const std::vector<double>& TimeSeries::channel(std::string_view name) const {
  for (const auto& c : channels_)
    if (c.first == name) return c.second;
  throw std::out_of_range("no channel named '" + std::string(name) + "'");
}

namespace {

struct State {
  double x;
  double y;
};

State derivative(const PredatorPreyParams& p, double scale, State s) {
  return {scale * (p.c1 * s.x - p.c3 * s.x * s.y), scale * (-p.c2 * s.y + p.c4 * s.x * s.y)};
}

State rk4_step(const PredatorPreyParams& p, double scale, State s, double h) {
  const State k1 = derivative(p, scale, s);
  const State k2 = derivative(p, scale, {s.x + 0.5 * h * k1.x, s.y + 0.5 * h * k1.y});
  const State k3 = derivative(p, scale, {s.x + 0.5 * h * k2.x, s.y + 0.5 * h * k2.y});
  const State k4 = derivative(p, scale, {s.x + h * k3.x, s.y + h * k3.y});
  return {s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y)};
}

TimeSeries integrate(const PredatorPreyParams& p, const PredatorPreySetup& s) {
  if (!(s.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(s.t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
  if (!(s.time_scale > 0.0)) throw std::invalid_argument("time_scale must be > 0");
  const auto steps = static_cast<std::size_t>(std::llround(s.t_end / s.dt));
  std::vector<double> t{0.0};
  std::vector<double> xs{s.x0};
  std::vector<double> ys{s.y0};
  t.reserve(steps + 1);
  xs.reserve(steps + 1);
  ys.reserve(steps + 1);
  State st{s.x0, s.y0};
  bool truncated = false;
  for (std::size_t i = 1; i <= steps; ++i) {
    st = rk4_step(p, s.time_scale, st, s.dt);
    if (!std::isfinite(st.x) || !std::isfinite(st.y)) {
      truncated = true;
      break;
    }
    t.push_back(static_cast<double>(i) * s.dt);
    xs.push_back(st.x);
    ys.push_back(st.y);
  }
  TimeSeries out(std::move(t));
  out.add_channel("x", std::move(xs));
  out.add_channel("y", std::move(ys));
  out.truncated = truncated;
  return out;
}

void check_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("length mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  if (a.empty()) throw std::invalid_argument("series must not be empty");
}

}  // namespace

TimeSeries integrate_predator_prey(const PredatorPreyParams& p, double x0, double y0, double t_end, double dt) {
  return integrate(p, PredatorPreySetup{x0, y0, t_end, dt});
}

TimeSeries integrate_predator_prey(const PredatorPreyParams& p, const PredatorPreySetup& setup) {
  return integrate(p, setup);
}

std::optional<double> naiveperiod(std::span<const double> series, std::span<const double> t) {
  if (series.size() != t.size()) throw std::invalid_argument("series and time column differ in length");
  if (series.size() < 3) throw std::invalid_argument("naiveperiod needs at least 3 samples");
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t peaks = 0;
  for (std::size_t i = 1; i + 1 < series.size(); ++i) {
    if (series[i] > series[i - 1] && series[i] > series[i + 1]) {
      if (peaks == 0) first = i;
      last = i;
      ++peaks;
    }
  }
  if (peaks < 2) return std::nullopt;
  // mean of consecutive spacings telescopes to (last - first) / (peaks - 1)
  return (t[last] - t[first]) / static_cast<double>(peaks - 1);
}

double rmsd(std::span<const double> a, std::span<const double> b) {
  check_same_length(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc / static_cast<double>(a.size()));
}

double rmsd(double a, double b) { return std::fabs(a - b); }

double nrmsd(std::span<const double> a, std::span<const double> b) {
  check_same_length(a, b);
  double norm = 0.0;
  if (b.size() == 1) {
    norm = std::fabs(b[0]);
  } else {
    const auto [lo, hi] = std::minmax_element(b.begin(), b.end());
    norm = *hi - *lo;
  }
  if (norm == 0.0) throw std::invalid_argument("nrmsd normalizer is zero");
  return rmsd(a, b) / norm;
}

double nrmsd(double a, double b) {
  if (b == 0.0) throw std::invalid_argument("nrmsd normalizer is zero");
  return std::fabs(a - b) / std::fabs(b);
}

double dtw_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("dtw_distance needs non-empty series");
  const std::size_t m = b.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(m + 1, inf);
  std::vector<double> cur(m + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = inf;
    for (std::size_t j = 1; j <= m; ++j) {
      const double cost = std::fabs(a[i - 1] - b[j - 1]);
      cur[j] = cost + std::min({prev[j - 1], prev[j], cur[j - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

PredatorPreySetup default_period_setup(double target) {
  PredatorPreySetup s;
  s.t_end = target > 0.0 ? 4.0 * target : 400.0;
  s.time_scale = kPeriodTimeScale;
  return s;
}

double period_tuning_cost(const PredatorPreyParams& p, double target, const PredatorPreySetup& setup) {
  if (!(target > 0.0)) throw std::invalid_argument("target period must be > 0");
  const TimeSeries ts = integrate_predator_prey(p, setup);
  if (ts.truncated || ts.size() < 3) return kPenalty;
  std::vector<double> y = ts.channel("y");
  // negative predator values are numerical artefacts; a huge constant keeps
  // them from producing peaks
  for (auto& v : y)
    if (v < 0.0) v = std::numeric_limits<double>::max();
  const auto period = naiveperiod(y, ts.t());
  if (!period) return kPenalty;
  return nrmsd(*period, target);
}

double period_tuning_cost(const PredatorPreyParams& p, double target) {
  return period_tuning_cost(p, target, default_period_setup(target));
}

double doubling_time_cost(double g, double lower, double upper, double center) {
  if (!(lower < center && center < upper)) throw std::invalid_argument("doubling_time_cost needs lower < center < upper");
  if (g >= lower && g <= upper) return 0.0;
  return rmsd(g, center);
}

}  // namespace metaestim
