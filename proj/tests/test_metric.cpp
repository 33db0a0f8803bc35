#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "symplopt/metric.hpp"
#include "symplopt/oracles.hpp"
#include "symplopt/problems.hpp"
#include "symplopt/retraction.hpp"
#include "test_support.hpp"

using namespace symplopt;
using testing::rel_err;

TEST_CASE("metric construction guards") {
  CHECK_THROWS_AS(Metric::canonical_like(0.0), DefinitenessError);
  CHECK_THROWS_AS(Metric::canonical_like(-1.0), DefinitenessError);
  Matrix indefinite = Matrix::Identity(4, 4);
  indefinite(0, 0) = -1.0;
  CHECK_THROWS_AS(Metric::weighted_euclidean(indefinite), DefinitenessError);
  Rng rng(0);
  CHECK_THROWS_AS(Metric::weighted_euclidean(rng.gaussian_matrix(4, 4)), InvariantError);
}

TEST_CASE("inner products") {
  Rng rng(1);
  SymplecticPoint x = random_point({4, 2}, 2);
  Matrix z1 = random_tangent(x, 3).matrix();
  Matrix z2 = random_tangent(x, 4).matrix();

  Metric euclid = Metric::euclidean();
  CHECK(euclid.inner(x, z1, z2) ==
        doctest::Approx((z1.transpose() * z2).trace()).epsilon(1e-13));

  // split form with K = 0: Z = X J W gives g(Z, Z) = tr(W^T W) at rho = 1
  Matrix w = testing::random_symmetric(rng, 4);
  Matrix z = right_j(x.matrix()) * w;
  Metric canonical = Metric::canonical_like(1.0);
  CHECK(canonical.inner(x, z, z) == doctest::Approx((w.transpose() * w).trace()).epsilon(1e-10));

  // explicit-weight oracle at arbitrary rho; the 1e-12 agreement needs a
  // well-conditioned X^T X (roundoff scales with its condition number)
  SymplecticPoint xw = testing::well_conditioned_point({4, 2}, 21);
  Matrix zw1 = random_tangent(xw, 22).matrix();
  Matrix zw2 = random_tangent(xw, 23).matrix();
  for (double rho : {0.3, 1.0, 4.2}) {
    Metric m = Metric::canonical_like(rho);
    Matrix weight = oracles::explicit_weight_matrix(m, xw);
    const double direct = m.inner(xw, zw1, zw2);
    const double via_weight = (zw1.transpose() * weight * zw2).trace();
    CHECK(std::abs(direct - via_weight) <= 1e-12 * (1 + std::abs(via_weight)));
    // at a generic simplecticized draw the agreement degrades no worse than
    // the conditioning allows
    Matrix weight_x = oracles::explicit_weight_matrix(m, x);
    const double d2 = m.inner(x, z1, z2);
    const double v2 = (z1.transpose() * weight_x * z2).trace();
    CHECK(std::abs(d2 - v2) <= 1e-9 * (1 + std::abs(v2)));
  }

  Matrix mw = testing::random_spd(rng, 8);
  Metric weighted = Metric::weighted_euclidean(mw);
  CHECK(weighted.inner(x, z1, z2) ==
        doctest::Approx((z1.transpose() * mw * z2).trace()).epsilon(1e-12));

  // positivity
  CHECK(canonical.inner(x, z1, z1) > 0.0);
  CHECK(weighted.inner(x, z1, z1) > 0.0);
}

TEST_CASE("inverse weight application") {
  Rng rng(5);
  SymplecticPoint x = random_point({5, 2}, 6);

  Metric euclid = Metric::euclidean();
  Matrix y = rng.gaussian_matrix(10, 4);
  CHECK(euclid.minv_apply(x, y) == y);

  for (double rho : {0.5, 1.0, 2.0}) {
    Metric canonical = Metric::canonical_like(rho);
    // M^{-1} (J X) = rho X J
    CHECK(rel_err(canonical.minv_apply(x, x.jx()), rho * right_j(x.matrix())) <= 1e-12);
    // inverse-pair oracle against the explicit weight
    Matrix weight = oracles::explicit_weight_matrix(canonical, x);
    CHECK((weight * canonical.minv_apply(x, y) - y).norm() <= 1e-10 * (1 + y.norm()));
    CHECK((canonical.m_apply(x, canonical.minv_apply(x, y)) - y).norm() <=
          1e-10 * (1 + y.norm()));
  }

  Matrix mw = testing::random_spd(rng, 10);
  Metric weighted = Metric::weighted_euclidean(mw);
  CHECK((mw * weighted.minv_apply(x, y) - y).norm() <= 1e-10 * (1 + y.norm()));
}

TEST_CASE("tangent projections") {
  Rng rng(7);
  SymplecticPoint x = random_point({5, 2}, 8);
  Matrix y = rng.gaussian_matrix(10, 4);

  // canonical closed form, rho-independent to the bit
  Metric c1 = Metric::canonical_like(0.1);
  Metric c2 = Metric::canonical_like(1.0);
  Metric c3 = Metric::canonical_like(10.0);
  Matrix p1 = c1.project_tangent_matrix(x, y);
  CHECK((p1 - c2.project_tangent_matrix(x, y)).norm() <= 1e-12 * (1 + p1.norm()));
  CHECK((p1 - c3.project_tangent_matrix(x, y)).norm() <= 1e-12 * (1 + p1.norm()));
  Matrix closed = y - right_j(x.matrix()) * skew_part(x.jx().transpose() * y);
  CHECK(rel_err(p1, closed) <= 1e-14);
  // Omega_{X,Y} = (1/rho) skew(X^T J^T Y)
  CHECK(rel_err(c3.omega_for(x, y), skew_part(x.jx().transpose() * y) / 10.0) <= 1e-12);

  Rng mg(9);
  std::vector<Metric> metrics{c2, Metric::euclidean(),
                              Metric::weighted_euclidean(testing::random_spd(mg, 10))};
  for (const Metric& metric : metrics) {
    Matrix py = metric.project_tangent_matrix(x, y);
    // tangency and idempotence
    CHECK(dfx(x.matrix(), py).norm() <= 1e-9 * (1 + py.norm()));
    CHECK((metric.project_tangent_matrix(x, py) - py).norm() <= 1e-10 * (1 + y.norm()));
    // fixed point on tangents
    Matrix z = random_tangent(x, 10).matrix();
    CHECK((metric.project_tangent_matrix(x, z) - z).norm() <= 1e-10 * (1 + z.norm()));
    // normal directions are annihilated
    Matrix omega = testing::random_skew(mg, 4);
    Matrix normal = metric.minv_apply(x, x.jx() * omega);
    CHECK(metric.project_tangent_matrix(x, normal).norm() <= 1e-9 * (1 + normal.norm()));
    // g-orthogonality of the split, and the residual is a recoverable normal
    Matrix residual = y - py;
    CHECK(std::abs(metric.inner(x, py, residual)) <= 1e-9 * (1 + y.squaredNorm()));
    Matrix jxo = metric.m_apply(x, residual);  // should equal J X Omega
    Matrix omega_rec = x.xtx_solve(x.jx().transpose() * jxo);
    CHECK((omega_rec + omega_rec.transpose()).norm() <= 1e-9 * (1 + omega_rec.norm()));
    CHECK((metric.minv_apply(x, x.jx() * omega_rec) - residual).norm() <=
          1e-9 * (1 + residual.norm()));
  }
}

TEST_CASE("riemannian gradients") {
  Rng rng(11);
  const Index n = 5, k = 2;
  SymplecticPoint x = random_point({n, k}, 12);
  Matrix a = testing::random_spd(rng, 2 * n, 1.0);
  auto cost = trace_problem(a);

  std::vector<Metric> metrics{Metric::canonical_like(0.7), Metric::euclidean(),
                              Metric::weighted_euclidean(testing::random_spd(rng, 2 * n))};
  for (const Metric& metric : metrics) {
    TangentVector grad = metric.riemannian_gradient(x, *cost);
    CHECK(grad.tangency_residual() <= 1e-9 * (1 + grad.matrix().norm()));

    // defining identity g(grad, Z) = <ambient grad, Z> over random tangents
    Matrix ambient = cost->gradient(x.matrix());
    for (int trial = 0; trial < 20; ++trial) {
      Matrix z = random_tangent(x, 100 + trial).matrix();
      const double lhs = metric.inner(x, grad.matrix(), z);
      const double rhs = (ambient.array() * z.array()).sum();
      CHECK(std::abs(lhs - rhs) <= 1e-8 * (1 + std::abs(rhs)));
    }

    // finite-difference directional derivative through the retraction
    Matrix z = random_tangent(x, 500).matrix();
    const double t = 1e-5;
    const double fd = (cost->value(retract(RetractionKind::kSr, x, t * z).matrix()) -
                       cost->value(retract(RetractionKind::kSr, x, -t * z).matrix())) /
                      (2 * t);
    const double lhs = metric.inner(x, grad.matrix(), z);
    CHECK(std::abs(lhs - fd) <= 1e-5 * (1 + std::abs(fd)));
  }
}

TEST_CASE("gradient vanishes at the least-squares minimizer") {
  ProblemInstance inst = make_least_squares_instance(8, 2, 3);
  SymplecticPoint xmin(*inst.known_minimizer, 1e-6);
  for (const Metric& metric :
       {Metric::canonical_like(1.0), Metric::euclidean(),
        Metric::weighted_euclidean(*inst.cost->constant_hessian())}) {
    TangentVector grad = metric.riemannian_gradient(xmin, *inst.cost);
    CHECK(metric.norm(grad) <= 1e-9);
  }
}
