#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "symplopt/problems.hpp"
#include "test_support.hpp"

using namespace symplopt;
using testing::rel_err;

namespace {

// Central-difference consistency of the ambient gradient and Hessian action.
void check_derivatives(const CostFunction& cost, const Matrix& x, Rng& rng,
                       double tol_grad = 1e-6, double tol_hess = 1e-5) {
  const double t = 1e-6 * (1.0 + x.norm());
  Matrix z = rng.gaussian_matrix(x.rows(), x.cols());
  z /= z.norm();

  const double fd = (cost.value(x + t * z) - cost.value(x - t * z)) / (2 * t);
  const double directional = (cost.gradient(x).array() * z.array()).sum();
  CHECK(std::abs(fd - directional) <= tol_grad * (1 + std::abs(fd)));

  Matrix hz_fd = (cost.gradient(x + t * z) - cost.gradient(x - t * z)) / (2 * t);
  CHECK(rel_err(cost.hessian_apply(x, z), hz_fd) <= tol_hess);
}

}  // namespace

TEST_CASE("least squares: minimizer, derivatives, constant hessian") {
  ProblemInstance inst = make_least_squares_instance(10, 3, 0);
  // the generator's block coefficient matrix is symplectic by construction
  CHECK(feasibility(inst.a) <= 1e-10);
  CHECK(feasibility(inst.b) <= 1e-10);

  const Matrix& xmin = *inst.known_minimizer;
  CHECK(feasibility(xmin) <= 1e-10);
  CHECK(inst.cost->value(xmin) <= 1e-18);
  CHECK(inst.cost->gradient(xmin).norm() <= 1e-9);

  Rng rng(1);
  Matrix x = random_point({10, 3}, 2).matrix();
  check_derivatives(*inst.cost, x, rng);

  const Matrix* h = inst.cost->constant_hessian();
  REQUIRE(h != nullptr);
  Matrix z = rng.gaussian_matrix(20, 6);
  CHECK((inst.cost->hessian_apply(x, z) - *h * z).norm() == 0.0);

  CHECK_THROWS_AS(least_squares_problem(Matrix::Zero(4, 4), Matrix::Zero(4, 2)),
                  InvariantError);
}

TEST_CASE("trace: value, derivatives, identity case") {
  Rng rng(2);
  Matrix a = testing::random_spd(rng, 8);
  auto cost = trace_problem(a);
  Matrix x = random_point({4, 2}, 3).matrix();
  CHECK(cost->value(x) == doctest::Approx(0.5 * (x.transpose() * a * x).trace()));
  check_derivatives(*cost, x, rng);

  auto identity_cost = trace_problem(Matrix::Identity(8, 8));
  CHECK(identity_cost->value(x) == doctest::Approx(0.5 * x.squaredNorm()));
  CHECK(rel_err(identity_cost->gradient(x), x) <= 1e-15);

  Matrix not_spd = -Matrix::Identity(4, 4);
  CHECK_THROWS_AS(trace_problem(not_spd), DefinitenessError);
}

TEST_CASE("trace generator: symplectic eigenvalue oracle at small size") {
  for (Index n : {3, 5, 6}) {
    ProblemInstance inst = make_trace_instance(n, 1, 40 + n);
    // the symplectic eigenvalues are the positive imaginary parts of eig(J A)
    Eigen::EigenSolver<Matrix> eig(apply_j(inst.a));
    std::vector<double> positive;
    for (Index i = 0; i < eig.eigenvalues().size(); ++i) {
      const auto lambda = eig.eigenvalues()(i);
      CHECK(std::abs(lambda.real()) <= 1e-8 * inst.a.norm());
      if (lambda.imag() > 0) positive.push_back(lambda.imag());
    }
    REQUIRE(positive.size() == static_cast<std::size_t>(n));
    std::sort(positive.begin(), positive.end());
    for (Index i = 0; i < n; ++i)
      CHECK(positive[i] == doctest::Approx(static_cast<double>(i + 1)).epsilon(1e-8));
  }
}

TEST_CASE("trace generator: known minimum matches k(k+1)/2") {
  ProblemInstance inst = make_trace_instance(6, 2, 5);
  CHECK(*inst.known_minimum == doctest::Approx(3.0));
  CHECK(inst.x0.feasibility() <= 1e-12);
}

TEST_CASE("quartic trace: derivatives and lower bound at identity data") {
  ProblemInstance inst = make_quartic_instance(3, 6);
  Rng rng(7);
  check_derivatives(*inst.cost, inst.x0.matrix(), rng);
  CHECK(inst.cost->constant_hessian() == nullptr);

  // A = B = I: f = (1/2) tr((X^T X)^2) >= n on the square manifold, with
  // equality iff X^T X = I; eigenvalue argument checked numerically.
  const Index n = 3;
  auto identity_cost =
      quartic_trace_problem(Matrix::Identity(2 * n, 2 * n), Matrix::Identity(2 * n, 2 * n));
  double best = 1e300;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x = random_point({n, n}, 100 + trial).matrix();
    best = std::min(best, identity_cost->value(x));
    CHECK(identity_cost->value(x) >= static_cast<double>(n) - 1e-9);
  }
  // orthogonal-symplectic points attain the bound
  SymplecticPoint id = SymplecticPoint::canonical({n, n});
  CHECK(identity_cost->value(id.matrix()) == doctest::Approx(static_cast<double>(n)));
}

TEST_CASE("gyroscopic surrogate instance is spd and normalized") {
  ProblemInstance inst = make_gyroscopic_trace_instance(8, 2, 8);
  CHECK(inst.family == "trace_gyroscopic_synthetic");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(inst.a);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
  CHECK(inst.a.norm() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("generators are deterministic in the seed") {
  ProblemInstance a = make_least_squares_instance(6, 2, 11);
  ProblemInstance b = make_least_squares_instance(6, 2, 11);
  CHECK(a.a == b.a);
  CHECK(a.b == b.b);
  CHECK(a.x0.matrix() == b.x0.matrix());

  ProblemInstance t1 = make_trace_instance(5, 2, 12);
  ProblemInstance t2 = make_trace_instance(5, 2, 12);
  CHECK(t1.a == t2.a);

  ProblemInstance q1 = make_quartic_instance(3, 13);
  ProblemInstance q2 = make_quartic_instance(3, 13);
  CHECK(q1.a == q2.a);
  CHECK(q1.x0.matrix() == q2.x0.matrix());
}

TEST_CASE("random jacobi spd: spectrum bounds") {
  Matrix a = random_jacobi_spd(12, 0.1, 9, 14);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  CHECK(eig.eigenvalues().minCoeff() >= 0.1 - 1e-12);
  CHECK(eig.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
  CHECK((a - a.transpose()).norm() <= 1e-14);
}
