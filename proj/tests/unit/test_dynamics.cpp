#include <doctest.h>

#include <cmath>
#include <numbers>

#include "metaestim/dynamics.hpp"
#include "oracles.hpp"

using namespace metaestim;

TEST_CASE("equilibrium stays put") {
  const TimeSeries ts = integrate_predator_prey({1, 1, 1, 1}, 1, 1, 50, 0.1);
  for (const double v : ts.channel("x")) CHECK(v == doctest::Approx(1.0));
  for (const double v : ts.channel("y")) CHECK(v == doctest::Approx(1.0));
  CHECK_FALSE(naiveperiod(ts.channel("y"), ts.t()));
}

TEST_CASE("no predator: exponential prey") {
  const PredatorPreyParams p{0.5, 1, 1, 1};
  const TimeSeries ts = integrate_predator_prey(p, 2, 0, 3, 0.01);
  CHECK(ts.size() == 301);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(ts.channel("y")[i] == 0.0);
    CHECK(std::fabs(ts.channel("x")[i] - oracle::prey_without_predator(2, 0.5, ts.t()[i])) < 1e-6);
  }
}

TEST_CASE("reference row for period 72 oscillates near 72") {
  const TimeSeries ts = integrate_predator_prey({0.3297914, 0.4675479, 1.650108, 0.778639}, default_period_setup(72));
  const auto per = naiveperiod(ts.channel("y"), ts.t());
  REQUIRE(per);
  CHECK(std::fabs(*per - 72) / 72 < 0.05);
}

TEST_CASE("naiveperiod") {
  std::vector<double> t, y;
  for (int i = 0; i <= 2400; ++i) {
    t.push_back(i * 0.1);
    y.push_back(std::sin(2 * std::numbers::pi * t.back() / 24));
  }
  const auto per = naiveperiod(y, t);
  REQUIRE(per);
  CHECK(std::fabs(*per - 24) < 0.2);
  const std::vector<double> flat(t.size(), 3.0);
  CHECK_FALSE(naiveperiod(flat, t));
  CHECK_THROWS(naiveperiod(std::vector<double>{1, 2}, std::vector<double>{0, 1}));
}

TEST_CASE("rmsd and nrmsd") {
  const std::vector<double> a{1, 2, 3};
  CHECK(rmsd(a, a) == 0.0);
  CHECK(rmsd(std::vector<double>{0, 0}, std::vector<double>{3, 4}) == doctest::Approx(std::sqrt(12.5)));
  CHECK(rmsd(60.0, 72.0) == 12.0);
  CHECK(nrmsd(73.0, 72.0) == doctest::Approx(1.0 / 72));
  CHECK(nrmsd(23.0, 24.0) == doctest::Approx(0.04166667));
  CHECK(nrmsd(a, a) == 0.0);
  CHECK_THROWS(nrmsd(1.0, 0.0));
  CHECK_THROWS(nrmsd(std::vector<double>{1, 2}, std::vector<double>{5, 5}));
  CHECK_THROWS(rmsd(std::vector<double>{1}, std::vector<double>{1, 2}));
}

TEST_CASE("dtw") {
  const std::vector<double> a{0, 1, 2};
  CHECK(dtw_distance(a, a) == 0.0);
  CHECK(dtw_distance(a, std::vector<double>{0, 2}) == 1.0);
  CHECK(dtw_distance(std::vector<double>{5}, std::vector<double>{7}) == 2.0);
  CHECK(oracle::dtw_brute_force(a, std::vector<double>{0, 2}) == 1.0);
  CHECK_THROWS(dtw_distance(std::vector<double>{}, a));
  const std::vector<double> x{0.3, 2.5, -1, 4, 4, 0}, y{1, -2, 3.5, 0.25};
  CHECK(dtw_distance(x, y) == doctest::Approx(oracle::dtw_brute_force(x, y)));
  CHECK(dtw_distance(x, y) == dtw_distance(y, x));
}

TEST_CASE("period tuning cost") {
  CHECK(period_tuning_cost({1.798102, 1.618035, 1.192361, 1.453045}, 12) <= 0.05);
  CHECK(period_tuning_cost({0.3297914, 0.4675479, 1.650108, 0.778639}, 72) <= 0.05);
  CHECK(period_tuning_cost({1, 1, 1, 1}, 72) == std::numeric_limits<double>::max());
  CHECK_THROWS(period_tuning_cost({1, 1, 1, 1}, 0));
}

TEST_CASE("doubling time cost") {
  CHECK(doubling_time_cost(52, 42, 62, 52) == 0.0);
  CHECK(doubling_time_cost(70, 42, 62, 52) == 18.0);
  CHECK(doubling_time_cost(42, 42, 62, 52) == 0.0);
  CHECK(doubling_time_cost(30, 33, 53, 43) == 13.0);
}

TEST_CASE("blow-up truncates the series") {
  const TimeSeries ts = integrate_predator_prey({50, 1, 0, 1}, 1, 0, 100, 0.1);
  CHECK(ts.truncated);
}
