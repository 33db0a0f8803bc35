#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <thread>
#include <vector>

#include "doctest.h"
#include "symplopt/manifold.hpp"
#include "test_support.hpp"

using namespace symplopt;
using testing::rel_err;

TEST_CASE("manifold dimension formula") {
  CHECK(ManifoldDims{1, 1}.dimension() == 3);
  CHECK(ManifoldDims{4, 2}.dimension() == 26);
  CHECK(ManifoldDims{20, 4}.dimension() == 292);
}

TEST_CASE("apply_j basics") {
  Matrix j2 = apply_j(Matrix::Identity(2, 2));
  CHECK(j2(0, 1) == 1.0);
  CHECK(j2(1, 0) == -1.0);
  CHECK(j2(0, 0) == 0.0);

  Rng rng(1);
  Matrix a = rng.gaussian_matrix(6, 3);
  CHECK((apply_j(apply_j(a)) + a).norm() <= 1e-15 * a.norm());
  CHECK((apply_j_t(apply_j(a)) - a).norm() <= 1e-15 * a.norm());
  CHECK(rel_err(apply_j(a), poisson_matrix(3) * a) <= 1e-15);
  CHECK(rel_err(right_j(a.transpose().eval()), a.transpose() * poisson_matrix(3)) <= 1e-15);
  CHECK_THROWS_AS(apply_j(rng.gaussian_matrix(5, 2)), DimensionError);
}

TEST_CASE("feasibility values") {
  SymplecticPoint canonical = SymplecticPoint::canonical({4, 2});
  CHECK(feasibility(canonical.matrix()) == doctest::Approx(0.0));

  for (double a : {0.5, -2.0, 3.0}) {
    Matrix x(2, 2);
    x << a, 0.0, 0.0, 1.0 / a;
    CHECK(feasibility(x) <= 1e-15);
  }

  const Index n = 3;
  Matrix twice = 2.0 * Matrix::Identity(2 * n, 2 * n);
  CHECK(feasibility(twice) == doctest::Approx(3.0 * std::sqrt(2.0 * n)));
}

TEST_CASE("dfx and its adjoint") {
  SymplecticPoint x = random_point({3, 2}, 2);
  TangentVector z = random_tangent(x, 3);
  CHECK(dfx(x.matrix(), z.matrix()).norm() <= 1e-12 * (1 + z.matrix().norm()));

  Rng rng(4);
  // direct-formula oracle for normal-type directions J X Omega0
  Matrix omega0 = testing::random_skew(rng, 4);
  Matrix zn = apply_j(x.matrix()) * omega0;
  Matrix expected = -(x.xtx() * omega0 + omega0 * x.xtx());
  CHECK(rel_err(dfx(x.matrix(), zn), expected) <= 1e-13);

  // adjoint identity <dfx(Z), W> = <Z, dfx*(W)>
  for (int trial = 0; trial < 10; ++trial) {
    Matrix zr = rng.gaussian_matrix(6, 4);
    Matrix w = testing::random_skew(rng, 4);
    const double lhs = (dfx(x.matrix(), zr).array() * w.array()).sum();
    const double rhs = (zr.array() * dfx_adjoint(x.matrix(), w).array()).sum();
    CHECK(std::abs(lhs - rhs) <= 1e-13 * (1 + std::abs(rhs)));
  }
  CHECK_THROWS_AS(dfx_adjoint(x.matrix(), Matrix::Identity(4, 4)), InvariantError);
}

TEST_CASE("oblique projector") {
  // square case: P_X vanishes
  SymplecticPoint square = random_point({3, 3}, 5);
  CHECK(square.px().norm() <= 1e-12);

  SymplecticPoint x = SymplecticPoint::canonical({4, 2});
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix y = rng.gaussian_matrix(8, 4);
    Matrix py = x.apply_px(y);
    CHECK(dfx(x.matrix(), py).norm() <= 1e-10 * (1 + py.norm()));
  }

  SymplecticPoint xr = random_point({5, 2}, 7);
  Matrix p = xr.px();
  CHECK((p * p - p).norm() <= 1e-12 * (1 + p.norm()));
  // annihilates the canonical normal directions X J Omega
  Matrix omega = testing::random_skew(rng, 4);
  CHECK((p * (right_j(xr.matrix()) * omega)).norm() <= 1e-10);
  // operator form agrees with the dense matrix
  Matrix y = rng.gaussian_matrix(10, 4);
  CHECK(rel_err(xr.apply_px(y), p * y) <= 1e-13);
  CHECK(rel_err(xr.apply_px_t(y), p.transpose() * y) <= 1e-13);
}

TEST_CASE("orthogonal-complement frame") {
  SymplecticPoint square = random_point({2, 2}, 8);
  CHECK(square.xperp().cols() == 0);

  for (auto [n, k] : {std::pair<Index, Index>{4, 1}, {5, 2}, {6, 3}}) {
    SymplecticPoint x = random_point({n, k}, 9 + n);
    const Matrix& xperp = x.xperp();
    REQUIRE(xperp.cols() == 2 * n - 2 * k);
    CHECK((x.matrix().transpose() * xperp).norm() <= 1e-10);

    Matrix b = xperp.transpose() * apply_j(xperp);
    Matrix normalized = xperp * b.inverse();
    CHECK(rel_err(normalized.transpose() * normalized,
                  Matrix::Identity(2 * n - 2 * k, 2 * n - 2 * k)) <= 1e-8);

    // J X_perp X_perp^T J^T = P_X P_X^T
    Matrix lhs = apply_j(xperp) * apply_j(xperp).transpose();
    Matrix rhs = x.px() * x.px().transpose();
    CHECK((lhs - rhs).norm() <= 1e-8 * (1 + rhs.norm()));
  }
}

TEST_CASE("tangent parameterization annihilates dfx") {
  Rng rng(10);
  SymplecticPoint x = random_point({4, 2}, 11);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix w = testing::random_symmetric(rng, 4);
    Matrix kmat = rng.gaussian_matrix(4, 4);
    Matrix z = right_j(x.matrix()) * w + apply_j(x.xperp()) * kmat;
    CHECK(dfx(x.matrix(), z).norm() <= 1e-10 * (1 + z.norm()));
  }
}

TEST_CASE("random points: determinism and feasibility sweep") {
  SymplecticPoint a = random_point({20, 4}, 42);
  SymplecticPoint b = random_point({20, 4}, 42);
  CHECK(a.matrix() == b.matrix());  // bitwise

  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    worst = std::max(worst, random_point({20, 4}, seed).feasibility());
  CHECK(worst <= 1e-9);
}

TEST_CASE("point validation") {
  Matrix bad = Matrix::Identity(4, 4) * 2.0;
  CHECK_THROWS_AS(SymplecticPoint{bad}, InvariantError);
  CHECK_THROWS_AS(TangentVector(SymplecticPoint::canonical({2, 1}),
                                Matrix::Ones(4, 2)),
                  InvariantError);
}

TEST_CASE("shared points race their lazy caches safely") {
  // Hammer the lazily built projector, frame and Lyapunov caches from
  // several threads on one shared point; results must agree bitwise with
  // a single-threaded evaluation.
  SymplecticPoint x = random_point({8, 2}, 77);
  Matrix y = Rng(78).gaussian_matrix(16, 4);
  Matrix px_ref = x.px();
  const Matrix xperp_ref = x.xperp();

  SymplecticPoint shared = random_point({8, 2}, 77);
  std::vector<std::thread> workers;
  std::vector<Matrix> px_out(4), xperp_out(4), lyap_out(4);
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&, t] {
      px_out[t] = shared.px();
      xperp_out[t] = shared.xperp();
      auto solver = shared.cached_lyapunov(&px_ref, [&] { return shared.xtx(); });
      lyap_out[t] = solver->solve(Matrix::Identity(4, 4));
    });
  for (auto& w : workers) w.join();
  for (int t = 0; t < 4; ++t) {
    CHECK(px_out[t] == px_ref);
    CHECK(xperp_out[t] == xperp_ref);
    CHECK(lyap_out[t] == lyap_out[0]);
  }
}
