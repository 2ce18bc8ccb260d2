#ifndef METAESTIM_DYNAMICS_HPP
#define METAESTIM_DYNAMICS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace metaestim {

/// Sampled trajectory: a time column plus named channels of equal length.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> t) : t_(std::move(t)) {}

  /// Throws std::invalid_argument if the length differs from the time column
  /// or the name is already used.
  void add_channel(std::string name, std::vector<double> values);

  std::size_t size() const noexcept { return t_.size(); }
  const std::vector<double>& t() const noexcept { return t_; }
  std::vector<double>& t() noexcept { return t_; }

  bool has_channel(std::string_view name) const;
  /// Throws std::out_of_range for an unknown channel.
  const std::vector<double>& channel(std::string_view name) const;
  const std::vector<std::pair<std::string, std::vector<double>>>& channels() const noexcept { return channels_; }

  /// True when integration stopped early on a non-finite state.
  bool truncated = false;

 private:
  std::vector<double> t_;
  std::vector<std::pair<std::string, std::vector<double>>> channels_;
};

/// dx/dt = c1 x - c3 x y, dy/dt = -c2 y + c4 x y
struct PredatorPreyParams {
  double c1 = 1.0;  // prey growth
  double c2 = 1.0;  // predator death
  double c3 = 1.0;  // predation
  double c4 = 1.0;  // predation effect on predator growth
};

/// Integration setup. time_scale multiplies the right-hand side, i.e. one
/// unit of series time spans time_scale units of ODE time.
struct PredatorPreySetup {
  double x0 = 1.0;
  double y0 = 1.0;
  double t_end = 400.0;
  double dt = 0.1;
  double time_scale = 1.0;
};

/// Series-time unit used by period tuning. With x0 = y0 = 1 it places the
/// reference parameter sets for periods 12 and 72 on their targets.
inline constexpr double kPeriodTimeScale = 0.31;

/// Classic fixed-step RK4 integration over [0, t_end]; channels "x" and "y".
TimeSeries integrate_predator_prey(const PredatorPreyParams& p, double x0, double y0, double t_end, double dt);
TimeSeries integrate_predator_prey(const PredatorPreyParams& p, const PredatorPreySetup& setup = {});

/// Mean spacing, in units of t, between consecutive strict local maxima.
/// Empty when the series has fewer than two maxima.
std::optional<double> naiveperiod(std::span<const double> series, std::span<const double> t);

double rmsd(std::span<const double> a, std::span<const double> b);
double rmsd(double a, double b);

/// rmsd normalized by the range of b (n > 1) or by |b| (n == 1).
double nrmsd(std::span<const double> a, std::span<const double> b);
double nrmsd(double a, double b);

/// Unconstrained dynamic time warping distance with |a_i - b_j| local cost
/// and match/insert/delete steps.
double dtw_distance(std::span<const double> a, std::span<const double> b);

/// NRMSD between the period detected in the predator channel and target;
/// kPenalty when no period is found or the integration blew up.
double period_tuning_cost(const PredatorPreyParams& p, double target, const PredatorPreySetup& setup);
double period_tuning_cost(const PredatorPreyParams& p, double target);

/// The integration setup used for a target period when none is given.
PredatorPreySetup default_period_setup(double target);

/// Hybrid categorical cost: zero inside [lower, upper], else rmsd(g, center).
double doubling_time_cost(double g, double lower, double upper, double center);

}  // namespace metaestim

#endif  // METAESTIM_DYNAMICS_HPP
