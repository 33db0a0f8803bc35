#include "symplopt/problems.hpp"

#include <Eigen/LU>
#include <cmath>

#include "symplopt/rng.hpp"

namespace symplopt {

namespace {

class LeastSquaresCost final : public CostFunction {
 public:
  LeastSquaresCost(Matrix a, Matrix b) : a_(std::move(a)), b_(std::move(b)) {
    ata_ = a_.transpose() * a_;
    atb_ = a_.transpose() * b_;
  }

  double value(const Matrix& x) const override {
    return 0.5 * (a_ * x - b_).squaredNorm();
  }
  Matrix gradient(const Matrix& x) const override { return ata_ * x - atb_; }
  Matrix hessian_apply(const Matrix&, const Matrix& z) const override { return ata_ * z; }
  const Matrix* constant_hessian() const override { return &ata_; }

 private:
  Matrix a_, b_, ata_, atb_;
};

class TraceCost final : public CostFunction {
 public:
  explicit TraceCost(Matrix a) : a_(std::move(a)) {}

  double value(const Matrix& x) const override {
    return 0.5 * (x.array() * (a_ * x).array()).sum();
  }
  Matrix gradient(const Matrix& x) const override { return a_ * x; }
  Matrix hessian_apply(const Matrix&, const Matrix& z) const override { return a_ * z; }
  const Matrix* constant_hessian() const override { return &a_; }

 private:
  Matrix a_;
};

class QuarticTraceCost final : public CostFunction {
 public:
  QuarticTraceCost(Matrix a, Matrix b) : a_(std::move(a)), b_(std::move(b)) {}

  double value(const Matrix& x) const override {
    Matrix t1 = x.transpose() * (a_ * x);
    Matrix t2 = x.transpose() * (b_ * x);
    return 0.5 * (t1 * t2).trace();
  }

  Matrix gradient(const Matrix& x) const override {
    Matrix ax = a_ * x;
    Matrix bx = b_ * x;
    return bx * (x.transpose() * ax) + ax * (x.transpose() * bx);
  }

  Matrix hessian_apply(const Matrix& x, const Matrix& z) const override {
    Matrix ax = a_ * x;
    Matrix bx = b_ * x;
    Matrix az = a_ * z;
    Matrix bz = b_ * z;
    return bz * (x.transpose() * ax) + az * (x.transpose() * bx) +
           bx * (z.transpose() * ax) + bx * (ax.transpose() * z) +
           ax * (bx.transpose() * z) + ax * (z.transpose() * bx);
  }

 private:
  Matrix a_, b_;
};

void require_spd(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) throw DimensionError(std::string(who) + ": square matrix required");
  if ((a - a.transpose()).norm() > 1e-12 * (1.0 + a.norm()))
    throw InvariantError(std::string(who) + ": matrix must be symmetric");
  Eigen::LLT<Matrix> llt(0.5 * (a + a.transpose()));
  if (llt.info() != Eigen::Success)
    throw DefinitenessError(std::string(who) + ": matrix is not positive definite");
}

// [I A1; A2 I + A2 A1] with symmetric blocks is symplectic.
Matrix symplectic_block_matrix(const Matrix& a1, const Matrix& a2) {
  const Index n = a1.rows();
  Matrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n).setIdentity();
  out.topRightCorner(n, n) = a1;
  out.bottomLeftCorner(n, n) = a2;
  out.bottomRightCorner(n, n) = Matrix::Identity(n, n) + a2 * a1;
  return out;
}

}  // namespace

std::shared_ptr<CostFunction> least_squares_problem(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw DimensionError("least_squares_problem: A must be square and match B's rows");
  Eigen::PartialPivLU<Matrix> lu(a);
  if (lu.rcond() < 1e-14)
    throw InvariantError("least_squares_problem: A is numerically singular");
  return std::make_shared<LeastSquaresCost>(a, b);
}

std::shared_ptr<CostFunction> trace_problem(const Matrix& a) {
  require_spd(a, "trace_problem");
  return std::make_shared<TraceCost>(a);
}

std::shared_ptr<CostFunction> quartic_trace_problem(const Matrix& a, const Matrix& b) {
  require_spd(a, "quartic_trace_problem");
  require_spd(b, "quartic_trace_problem");
  if (a.rows() != b.rows()) throw DimensionError("quartic_trace_problem: size mismatch");
  return std::make_shared<QuarticTraceCost>(a, b);
}

Matrix random_jacobi_spd(Index m, double rcond, Index rotations, std::uint64_t seed) {
  if (!(rcond > 0.0 && rcond <= 1.0))
    throw DefinitenessError("random_jacobi_spd: rcond must lie in (0, 1]");
  Rng rng(seed);
  Matrix a = Matrix::Zero(m, m);
  // Eigenvalues log-spaced in [rcond, 1], then mixed by plane rotations.
  for (Index i = 0; i < m; ++i) {
    const double t = (m == 1) ? 0.0 : static_cast<double>(i) / static_cast<double>(m - 1);
    a(i, i) = std::pow(rcond, 1.0 - t);
  }
  for (Index r = 0; r < rotations; ++r) {
    Index i = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(m));
    Index j = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(m));
    if (i == j) continue;
    const double angle = 2.0 * 3.14159265358979323846 * rng.uniform01();
    Eigen::JacobiRotation<double> rot(std::cos(angle), std::sin(angle));
    a.applyOnTheLeft(i, j, rot.adjoint());
    a.applyOnTheRight(i, j, rot);
  }
  return 0.5 * (a + a.transpose());
}

ProblemInstance make_least_squares_instance(Index n, Index k, std::uint64_t seed) {
  Rng master(seed);
  const std::uint64_t seed_a = master.next_u64();
  const std::uint64_t seed_b = master.next_u64();
  const std::uint64_t seed_x0 = master.next_u64();

  Rng rng_a(seed_a);
  Matrix a1 = rng_a.uniform_matrix(n, n);
  Matrix a2 = rng_a.uniform_matrix(n, n);
  a1 = 0.1 * (a1 + a1.transpose()).eval();
  a2 = 0.1 * (a2 + a2.transpose()).eval();
  Matrix a = symplectic_block_matrix(a1, a2);

  Rng rng_b(seed_b);
  Matrix b = symplectic_factor(rng_b.gaussian_matrix(2 * n, 2 * k));

  ProblemInstance inst{least_squares_problem(a, b),
                       random_point({n, k}, seed_x0),
                       {n, k},
                       "least_squares",
                       std::nullopt,
                       std::nullopt,
                       a,
                       b};
  // A symplectic and B feasible make J^T A^T J B the unique minimizer.
  inst.known_minimizer = apply_j_t(a.transpose() * apply_j(b));
  inst.known_minimum = 0.0;
  return inst;
}

ProblemInstance make_trace_instance(Index n, Index k, std::uint64_t seed) {
  Rng master(seed);
  const std::uint64_t seed_s1 = master.next_u64();
  const std::uint64_t seed_s2 = master.next_u64();

  // About 3n nonzeros, mirroring a density-3/n sparse symmetric draw.
  const Index rotations = (3 * n) / 4 + 1;
  Matrix s1 = random_jacobi_spd(n, 0.1, rotations, seed_s1);
  Matrix s2 = random_jacobi_spd(n, 0.01, rotations, seed_s2);
  Matrix s = symplectic_block_matrix(s1, s2);

  Vector d(2 * n);
  for (Index i = 0; i < n; ++i) {
    d(i) = static_cast<double>(i + 1);
    d(n + i) = static_cast<double>(i + 1);
  }
  Matrix a = s.transpose() * d.asDiagonal() * s;
  a = 0.5 * (a + a.transpose()).eval();

  ProblemInstance inst{trace_problem(a),
                       SymplecticPoint::canonical({n, k}),
                       {n, k},
                       "trace",
                       std::nullopt,
                       std::nullopt,
                       a,
                       Matrix()};
  inst.known_minimum = 0.5 * static_cast<double>(k) * static_cast<double>(k + 1);
  return inst;
}

ProblemInstance make_gyroscopic_trace_instance(Index n, Index k, std::uint64_t seed) {
  Rng master(seed);
  // H = [ -E   K; -K^T -E ]-style Hamiltonian surrogate of a weakly damped
  // gyroscopic system: spd stiffness block, skew gyroscopic coupling and a
  // small damping scale. J H is then symmetrized and shifted to spd before
  // normalization.
  Matrix stiffness = random_jacobi_spd(n, 0.05, 2 * n, master.next_u64());
  Rng rng(master.next_u64());
  Matrix gyro = rng.gaussian_matrix(n, n);
  gyro = 0.5 * (gyro - gyro.transpose()).eval();
  const double damping = 0.01;

  Matrix h = Matrix::Zero(2 * n, 2 * n);
  h.topLeftCorner(n, n) = damping * gyro;
  h.topRightCorner(n, n) = Matrix::Identity(n, n);
  h.bottomLeftCorner(n, n) = -stiffness;
  h.bottomRightCorner(n, n) = damping * gyro;

  Matrix a = apply_j(h);
  a = 0.5 * (a + a.transpose()).eval();
  // Shift to spd (the surrogate only needs spd-ness plus the structure).
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  const double lambda_min = eig.eigenvalues().minCoeff();
  if (lambda_min <= 1e-8)
    a += (1e-6 - lambda_min) * Matrix::Identity(2 * n, 2 * n);
  a /= a.norm();

  ProblemInstance inst{trace_problem(a),
                       random_point({n, k}, master.next_u64()),
                       {n, k},
                       "trace_gyroscopic_synthetic",
                       std::nullopt,
                       std::nullopt,
                       a,
                       Matrix()};
  return inst;
}

ProblemInstance make_quartic_instance(Index n, std::uint64_t seed) {
  Rng master(seed);
  Rng rng_a(master.next_u64());
  Rng rng_b(master.next_u64());
  Rng rng_q(master.next_u64());

  Matrix a1 = rng_a.gaussian_matrix(2 * n, 2 * n);
  Matrix b1 = rng_b.gaussian_matrix(2 * n, 2 * n);
  Matrix a = a1.transpose() * a1;
  Matrix b = b1.transpose() * b1;
  a /= a.norm();
  b /= b.norm();
  a = (0.5 * (a + a.transpose())).eval();
  b = (0.5 * (b + b.transpose())).eval();

  // Orthogonal Q makes blkdiag(Q, Q) exactly symplectic.
  Eigen::HouseholderQR<Matrix> qr(rng_q.gaussian_matrix(n, n));
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  Matrix x0 = Matrix::Zero(2 * n, 2 * n);
  x0.topLeftCorner(n, n) = q;
  x0.bottomRightCorner(n, n) = q;

  return ProblemInstance{quartic_trace_problem(a, b),
                         SymplecticPoint(std::move(x0)),
                         {n, n},
                         "quartic_trace",
                         std::nullopt,
                         std::nullopt,
                         a,
                         b};
}

}  // namespace symplopt
