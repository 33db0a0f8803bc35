#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "symplopt/optimize.hpp"
#include "symplopt/oracles.hpp"
#include "symplopt/problems.hpp"
#include "test_support.hpp"

using namespace symplopt;

TEST_CASE("config validation") {
  ProblemInstance inst = make_least_squares_instance(3, 1, 0);
  OptimizerConfig config;
  config.tol = 1e-2;
  config.theta = 1e-4;  // violates tol < theta
  CHECK_THROWS_AS(hybrid(config, *inst.cost, inst.x0, NewtonVariant::kExact), ConfigError);
  config.tol = -1.0;
  CHECK_THROWS_AS(rgd(config, *inst.cost, inst.x0), ConfigError);
}

TEST_CASE("monotone gradient descent on a tiny instance") {
  ProblemInstance inst = make_trace_instance(1, 1, 1);
  OptimizerConfig config;
  config.metric = Metric::euclidean();
  config.line_search.alpha = 0.0;  // monotone special case
  config.tol = 1e-8;
  config.mxit = 2000;
  RunReport report = rgd(config, *inst.cost, random_point({1, 1}, 2));
  CHECK(report.status == RunStatus::kConverged);
  for (std::size_t i = 1; i < report.history.size(); ++i)
    CHECK(report.history[i].f <= report.history[i - 1].f + 1e-12);
  CHECK(report.armijo_violations == 0);
}

TEST_CASE("trace problem reaches its known minimum") {
  ProblemInstance inst = make_trace_instance(20, 2, 3);
  OptimizerConfig config;
  config.metric = Metric::weighted_euclidean(*inst.cost->constant_hessian());
  config.tol = 1e-8;
  config.mxit = 300;
  RunReport report = rgd(config, *inst.cost, inst.x0);
  CHECK(report.status == RunStatus::kConverged);
  CHECK(std::abs(report.f_star - *inst.known_minimum) <= 1e-6);
  CHECK(report.history.front().grad_norm_rel == doctest::Approx(1.0));
  // every iterate stays essentially feasible
  for (const auto& rec : report.history) CHECK(rec.feasibility <= 1e-8);
}

TEST_CASE("weighted metric beats the euclidean metric by a wide margin") {
  ProblemInstance inst = make_trace_instance(30, 2, 4);
  OptimizerConfig config;
  config.tol = 1e-8;
  config.mxit = 4000;
  config.metric = Metric::weighted_euclidean(*inst.cost->constant_hessian());
  RunReport weighted = rgd(config, *inst.cost, inst.x0);
  config.metric = Metric::euclidean();
  RunReport euclid = rgd(config, *inst.cost, inst.x0);
  REQUIRE(weighted.status == RunStatus::kConverged);
  REQUIRE(euclid.status == RunStatus::kConverged);
  CHECK(euclid.phase1_iterations >= 5 * weighted.phase1_iterations);
}

namespace {

// Near-critical rate fixture. Shrinking the data scale raises the quadratic
// constant so that three residuals of the terminal decay sit above the
// double-precision floor (the decay exponent itself is scale-invariant).
struct RateFixture {
  std::shared_ptr<CostFunction> cost;
  Metric metric = Metric::euclidean();
  SymplecticPoint x0;

  RateFixture(std::uint64_t instance_seed, std::uint64_t noise_seed)
      : x0(SymplecticPoint::canonical({1, 1})) {
    ProblemInstance inst = make_least_squares_instance(20, 3, instance_seed);
    cost = least_squares_problem(0.05 * inst.a, 0.05 * inst.b);
    metric = Metric::weighted_euclidean(*cost->constant_hessian());
    SymplecticPoint xmin(*inst.known_minimizer, 1e-6);
    TangentVector noise = random_tangent(xmin, noise_seed);
    Matrix direction = noise.matrix() / metric.norm(noise);
    x0 = retract(RetractionKind::kSr, xmin, 1e-3 * direction);
  }
};

double terminal_slope(const RunReport& report) {
  std::vector<double> gs;
  for (const auto& rec : report.history)
    if (rec.grad_norm_rel > 1e-11) gs.push_back(rec.grad_norm_rel);
  while (gs.size() > 4) gs.erase(gs.begin());
  REQUIRE(gs.size() >= 2);
  std::vector<double> xs(gs.begin(), gs.end() - 1), ys(gs.begin() + 1, gs.end());
  return oracles::fit_loglog_slope(xs, ys);
}

}  // namespace

TEST_CASE("newton converges quadratically near the minimizer") {
  RateFixture fixture(7, 6);
  OptimizerConfig config;
  config.metric = fixture.metric;
  config.tol = 1e-12;
  config.mxit = 20;
  RunReport report = newton(config, *fixture.cost, fixture.x0, NewtonVariant::kExact);
  CHECK(report.status == RunStatus::kConverged);
  CHECK(report.monotone_violations == 0);
  // terminal decay: grad_{j+1} <= C grad_j^2 shows a log-log slope >= 1.7
  CHECK(terminal_slope(report) >= 1.7);
}

TEST_CASE("inexact newton decays superlinearly") {
  RateFixture fixture(9, 8);
  OptimizerConfig config;
  config.metric = fixture.metric;
  config.tol = 1e-12;
  config.mxit = 30;
  RunReport report = newton(config, *fixture.cost, fixture.x0, NewtonVariant::kInexact);
  CHECK(report.status == RunStatus::kConverged);
  CHECK(terminal_slope(report) >= 1.3);
}

TEST_CASE("newton returns immediately at an exactly critical point") {
  SymplecticPoint x0 = random_point({6, 2}, 9);
  testing::StationaryCost cost;
  OptimizerConfig config;
  config.tol = 1e-6;
  RunReport report = newton(config, cost, x0, NewtonVariant::kExact);
  CHECK(report.status == RunStatus::kConverged);
  CHECK(report.phase2_iterations == 0);
  CHECK(report.x_star == x0.matrix());
}

TEST_CASE("hybrid: degenerate switch makes phase 1 empty") {
  ProblemInstance inst = make_least_squares_instance(8, 2, 10);
  Metric metric = Metric::weighted_euclidean(*inst.cost->constant_hessian());
  SymplecticPoint xmin(*inst.known_minimizer, 1e-6);
  TangentVector noise = random_tangent(xmin, 11);
  SymplecticPoint x0 =
      retract(RetractionKind::kSr, xmin, 1e-4 * noise.matrix() / metric.norm(noise));

  OptimizerConfig config;
  config.metric = metric;
  config.tol = 1e-10;
  // the switching test is relative, so the start itself satisfies any
  // threshold above 1: phase 1 is degenerate
  config.theta = 1.5;
  config.mxit = 50;
  RunReport report = hybrid(config, *inst.cost, x0, NewtonVariant::kExact);
  CHECK(report.status == RunStatus::kConverged);
  CHECK(report.phase1_iterations == 0);
  CHECK(report.phase2_iterations >= 1);
}

TEST_CASE("hybrid: switch failure is a status, not an exception") {
  ProblemInstance inst = make_least_squares_instance(10, 2, 12);
  OptimizerConfig config;
  config.metric = Metric::euclidean();
  config.tol = 1e-12;
  config.theta = 1e-8;  // unreachable within two iterations
  config.mxit = 2;
  RunReport report = hybrid(config, *inst.cost, inst.x0, NewtonVariant::kExact);
  CHECK(report.status == RunStatus::kSwitchFailed);
  CHECK(report.phase2_iterations == 0);
}

TEST_CASE("hybrid least squares: few newton steps finish the job") {
  ProblemInstance inst = make_least_squares_instance(25, 3, 13);
  OptimizerConfig config;
  config.metric = Metric::weighted_euclidean(*inst.cost->constant_hessian());
  config.retraction = RetractionKind::kSr;
  config.tol = 1e-10;
  config.theta = 1e-4;
  config.mxit = 2000;
  RunReport report = hybrid(config, *inst.cost, inst.x0, NewtonVariant::kInexact);
  CHECK(report.status == RunStatus::kConverged);
  CHECK(report.phase2_iterations <= 10);
  CHECK(report.f_star <= 1e-9);
  CHECK(report.feasibility <= 1e-9);
  const Matrix& xmin = *inst.known_minimizer;
  CHECK((report.x_star - xmin).norm() / xmin.norm() <= 1e-6);

  // history is monotone in j and tagged by phase
  for (std::size_t i = 1; i < report.history.size(); ++i) {
    CHECK(report.history[i].j == report.history[i - 1].j + 1);
    CHECK(report.history[i].phase >= report.history[i - 1].phase);
  }
}

TEST_CASE("quartic cost runs under the canonical-like metric") {
  ProblemInstance inst = make_quartic_instance(3, 14);
  OptimizerConfig config;
  config.metric = Metric::canonical_like(1.0);
  config.tol = 1e-4;
  config.mxit = 400;
  RunReport report = rgd(config, *inst.cost, inst.x0);
  CHECK(report.history.back().f <= report.history.front().f);
  CHECK(report.feasibility <= 1e-8);
}
