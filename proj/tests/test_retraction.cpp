#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "symplopt/oracles.hpp"
#include "symplopt/retraction.hpp"
#include "test_support.hpp"

using namespace symplopt;
using testing::rel_err;

TEST_CASE("zero direction is a fixed point") {
  SymplecticPoint x = random_point({6, 2}, 1);
  Matrix zero = Matrix::Zero(12, 4);
  CHECK(retract(RetractionKind::kSr, x, zero).matrix() == x.matrix());
  CHECK(rel_err(retract(RetractionKind::kCayley, x, zero).matrix(), x.matrix()) <= 1e-12);
}

TEST_CASE("first-order rigidity: central difference recovers Z") {
  SymplecticPoint x = random_point({5, 2}, 2);
  Matrix z = random_tangent(x, 3).matrix();
  z /= z.norm();

  const double eps = std::numeric_limits<double>::epsilon();
  for (RetractionKind kind : {RetractionKind::kCayley, RetractionKind::kSr}) {
    std::vector<double> steps, errors;
    for (double t : {1e-2, 1e-3, 1e-4, 1e-5}) {
      Matrix diff = (retract(kind, x, t * z).matrix() -
                     retract(kind, x, -t * z).matrix()) /
                    (2 * t);
      const double err = (diff - z).norm();
      // points drowned by the difference-quotient roundoff eps/(2t) carry no
      // slope information
      if (err > 100.0 * eps * (1.0 + x.matrix().norm()) / t) {
        steps.push_back(t);
        errors.push_back(err);
      }
    }
    REQUIRE(steps.size() >= 2);
    CHECK(oracles::fit_loglog_slope(steps, errors) >= 1.9);
  }
}

TEST_CASE("feasibility property run") {
  RetractionStats stats;
  double worst = 0.0;
  int returned = 0, rejected = 0;
  SymplecticPoint x = random_point({50, 6}, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    // fresh point occasionally, fresh direction always; steps up to twice
    // the point's own size (line searches never go further out)
    if (trial % 100 == 0) x = random_point({50, 6}, 100 + trial);
    Matrix z = random_tangent(x, 2000 + trial).matrix();
    z *= x.matrix().norm() / z.norm();
    const double scale = 1e-2 + 2.0 * (trial % 7) / 7.0;
    const RetractionKind kind =
        trial % 2 == 0 ? RetractionKind::kSr : RetractionKind::kCayley;
    try {
      worst = std::max(worst, retract(kind, x, scale * z, &stats).feasibility());
      ++returned;
    } catch (const RetractionDomainError&) {
      ++rejected;  // line searches shrink on this; no infeasible point escapes
    }
  }
  CHECK(worst <= 1e-9);
  CHECK(returned >= 950);
  CHECK(rejected <= 50);
}

TEST_CASE("sr output is bit-identical to the decomposition factor") {
  SymplecticPoint x = random_point({7, 3}, 6);
  Matrix z = random_tangent(x, 7).matrix();
  Matrix via_retraction = retract(RetractionKind::kSr, x, z).matrix();
  Matrix via_factor = sr_decompose(x.matrix() + z).s;
  CHECK(via_retraction == via_factor);
}

TEST_CASE("cayley and sr agree to first order") {
  SymplecticPoint x = random_point({6, 2}, 8);
  Matrix z = random_tangent(x, 9).matrix();
  z *= x.matrix().norm() / z.norm();

  std::vector<double> scales, gaps;
  for (double s : {1e-3, 1e-4, 1e-5}) {
    Matrix cay = retract(RetractionKind::kCayley, x, s * z).matrix();
    Matrix sr = retract(RetractionKind::kSr, x, s * z).matrix();
    scales.push_back(s);
    gaps.push_back((cay - sr).norm());
  }
  // O(||Z||^2) gap: slope about 2 on the log-log plot
  CHECK(oracles::fit_loglog_slope(scales, gaps) >= 1.9);
}

TEST_CASE("cayley domain error on a singular inner matrix") {
  // At k = n the inner matrix is I + (1/2) J^T Z^T J X; for X = I and
  // Z = t [[0,1],[1,0]] it equals [[1,-t/2],[-t/2,1]], exactly singular at
  // t = 2.
  SymplecticPoint x = SymplecticPoint::canonical({1, 1});
  Matrix z(2, 2);
  z << 0.0, 2.0, 2.0, 0.0;
  CHECK_THROWS_AS(retract(RetractionKind::kCayley, x, z), RetractionDomainError);
}

TEST_CASE("drift guard re-symplecticizes and flags") {
  // Inject a nearly-tangent direction with a deliberate normal component;
  // the Cayley output then drifts and the guard has to repair it.
  SymplecticPoint x = random_point({4, 2}, 10);
  Matrix z = random_tangent(x, 11).matrix();
  Matrix perturbation = 2e-5 * Rng(12).gaussian_matrix(8, 4);
  RetractionStats stats;
  SymplecticPoint out = retract(RetractionKind::kCayley, x, z + perturbation, &stats);
  CHECK(out.feasibility() <= 1e-9);
}
