#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "metaestim/core.hpp"
#include "metaestim/test_functions.hpp"

using namespace metaestim;

namespace {
double rosen(std::span<const double> x) { return rosenbrock(x); }
}

TEST_CASE("parameter spaces") {
  ParameterSpace s = add_parameter({}, {"x1", -100, 100});
  CHECK(s.dimension() == 1);
  CHECK_THROWS_AS(s.add({"x1", 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(s.add({"x2", 5, 5}), std::invalid_argument);
  CHECK_THROWS_AS(s.add({"x2", 6, 5}), std::invalid_argument);
  CHECK_THROWS_AS(s.add({"", 0, 1}), std::invalid_argument);
  s.add({"x2", 0, 2});
  CHECK(s.names() == std::vector<std::string>{"x1", "x2"});
  CHECK(s.index_of("x2") == 1u);
  CHECK_FALSE(s.index_of("x3"));
}

TEST_CASE("clamp projects per component") {
  const ParameterSpace one{{"a", 0, 10}};
  CHECK(clamp(one, std::vector<double>{12}) == std::vector<double>{10});
  CHECK(clamp(one, std::vector<double>{5}) == std::vector<double>{5});
  const ParameterSpace two{{"a", -1, 1}, {"b", 0, 2}};
  CHECK(clamp(two, std::vector<double>{-3, 1}) == std::vector<double>{-1, 1});
  CHECK(two.contains(std::vector<double>{-1, 2}));
  CHECK_FALSE(two.contains(std::vector<double>{-1.5, 1}));
}

TEST_CASE("evaluation bookkeeping") {
  Objective obj(ParameterSpace{{"x1", -100, 100}, {"x2", -100, 100}}, rosen);
  CHECK(obj.evaluate(std::vector<double>{1, 1}) == 0.0);
  CHECK(obj.total_evals() == 1);
  CHECK(obj.evaluate(std::vector<double>{0, 0}) == 1.0);

  const std::vector<std::vector<double>> batch{{1, 2}, {3, 4}, {5, 6}};
  const auto cands = obj.evaluate_candidates(batch, 7);
  REQUIRE(obj.visited().size() == 5);
  for (std::size_t i = 0; i < obj.visited().size(); ++i) CHECK(obj.visited()[i].pset == i + 1);
  CHECK(cands[2].pset == 5);
  CHECK(cands[2].iteration == 7);
  CHECK(cands[2].fitness == rosenbrock(batch[2]));

  obj.reset();
  CHECK(obj.total_evals() == 0);
  CHECK(obj.evaluate(std::vector<double>{0, 0}) == 1.0);
  CHECK(obj.visited().front().pset == 1);
}

TEST_CASE("convergence test") {
  Objective obj(ParameterSpace{{"x", 0, 1}}, rosen);
  CHECK(obj.tolerance() == 0.1);
  CHECK(is_converged(obj, 0.047021));
  CHECK_FALSE(is_converged(obj, 0.57479139));
  obj.set_tolerance(0);
  CHECK(is_converged(obj, 0.0));
  CHECK_THROWS_AS(obj.set_tolerance(-1), std::invalid_argument);
}

TEST_CASE("failed evaluations are penalised and the run continues") {
  Objective obj(ParameterSpace{{"x", -1, 1}}, [](std::span<const double> x) -> double {
    if (x[0] > 0) throw EvaluationError("model crashed");
    if (x[0] < -0.5) throw std::runtime_error("other");
    return x[0] * x[0];
  });
  const std::vector<std::vector<double>> batch{{0.5}, {-0.25}, {-0.75}};
  const auto f = obj.evaluate(batch);
  CHECK(f[0] == kPenalty);
  CHECK(f[1] == 0.0625);
  CHECK(f[2] == kPenalty);
  REQUIRE(obj.failures().size() == 2);
  CHECK(obj.failures()[0].pset == 1);
  CHECK(obj.failures()[0].message.find("model crashed") != std::string::npos);
  CHECK(obj.failures()[1].pset == 3);
}

TEST_CASE("nan cost counts as a failure") {
  Objective obj(ParameterSpace{{"x", -1, 1}}, [](std::span<const double>) { return std::nan(""); });
  CHECK(obj.evaluate(std::vector<double>{0}) == kPenalty);
  CHECK(obj.failures().size() == 1);
}

TEST_CASE("budget truncates a batch") {
  Objective obj(ParameterSpace{{"x", -1, 1}}, [](std::span<const double> x) { return x[0]; });
  obj.set_evaluation_budget(4);
  const std::vector<std::vector<double>> batch{{0.1}, {0.2}, {0.3}};
  obj.evaluate(batch);
  CHECK_FALSE(obj.budget_exhausted());
  const auto f = obj.evaluate(batch);
  CHECK(f[0] == 0.1);
  CHECK(f[1] == kUnevaluated);
  CHECK(f[2] == kUnevaluated);
  CHECK(obj.total_evals() == 4);
  CHECK(obj.budget_exhausted());
  const auto c = obj.evaluate_candidates(batch);
  CHECK_FALSE(c[0].evaluated());
}

TEST_CASE("parallel batches are recorded in batch order") {
  std::atomic<int> concurrent{0}, peak{0};
  Objective obj(ParameterSpace{{"x", 0, 100}}, [&](std::span<const double> x) {
    const int now = ++concurrent;
    int p = peak.load();
    while (now > p && !peak.compare_exchange_weak(p, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --concurrent;
    return x[0] * 2;
  });
  obj.set_parallelism(4);
  std::vector<std::vector<double>> batch;
  for (int i = 0; i < 16; ++i) batch.push_back({static_cast<double>(i)});
  const auto f = obj.evaluate(batch);
  for (int i = 0; i < 16; ++i) {
    CHECK(f[i] == 2.0 * i);
    CHECK(obj.visited()[i].values[0] == i);
    CHECK(obj.visited()[i].pset == static_cast<std::uint64_t>(i + 1));
  }
  CHECK(peak.load() > 1);
}

TEST_CASE("context evaluator sees the pset") {
  Objective obj(ParameterSpace{{"x", 0, 1}},
                [](std::span<const double>, const EvaluationContext& ctx) { return static_cast<double>(ctx.pset); });
  const std::vector<std::vector<double>> batch{{0}, {0}, {0}};
  CHECK(obj.evaluate(batch) == std::vector<double>{1, 2, 3});
}

TEST_CASE("make_estimates picks the first minimum") {
  Objective obj(ParameterSpace{{"x", -1, 1}}, [](std::span<const double> x) { return std::fabs(x[0]); });
  const std::vector<std::vector<double>> batch{{0.5}, {-0.25}, {0.25}, {0.75}};
  obj.evaluate(batch);
  const Estimates e = make_estimates("test", obj, {}, 0.0);
  CHECK(e.best.pset == 2);
  CHECK(e.stats.total_evals == 4);
  CHECK(e.stats.achieved_tolerance == 0.25);
  CHECK_FALSE(e.stats.converged);
}
