#include "symplopt/dense.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace symplopt {

namespace {

void require_square(const Matrix& a, const char* who) {
  if (a.rows() != a.cols())
    throw DimensionError(std::string(who) + ": square matrix required, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

void require_even_square(const Matrix& a, const char* who) {
  require_square(a, who);
  if (a.rows() % 2 != 0)
    throw DimensionError(std::string(who) + ": even dimension required");
}

}  // namespace

Matrix sym_part(const Matrix& a) {
  require_square(a, "sym_part");
  return 0.5 * (a + a.transpose());
}

Matrix skew_part(const Matrix& a) {
  require_square(a, "skew_part");
  return 0.5 * (a - a.transpose());
}

bool is_skew(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a + a.transpose()).norm() <= tol * (1.0 + a.norm());
}

LyapunovSolver::LyapunovSolver(const Matrix& c) {
  require_square(c, "LyapunovSolver");
  if ((c - c.transpose()).norm() > 1e-12 * (1.0 + c.norm()))
    throw InvariantError("LyapunovSolver: coefficient matrix is not symmetric");
  c_ = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c_);
  if (eig.info() != Eigen::Success)
    throw DefinitenessError("LyapunovSolver: eigendecomposition failed");
  lambda_ = eig.eigenvalues();
  q_ = eig.eigenvectors();
  if (lambda_.minCoeff() <= 0.0)
    throw DefinitenessError("LyapunovSolver: coefficient matrix is not positive definite");
}

Matrix LyapunovSolver::solve(const Matrix& rhs) const {
  if (rhs.rows() != c_.rows() || rhs.cols() != c_.cols())
    throw DimensionError("LyapunovSolver::solve: shape mismatch");
  Matrix transformed = q_.transpose() * rhs * q_;
  for (Index j = 0; j < transformed.cols(); ++j)
    for (Index i = 0; i < transformed.rows(); ++i)
      transformed(i, j) /= lambda_(i) + lambda_(j);
  return q_ * transformed * q_.transpose();
}

Matrix solve_lyapunov_spd(const Matrix& c, const Matrix& rhs) {
  Matrix out = LyapunovSolver(c).solve(rhs);
  if (is_skew(rhs)) out = (0.5 * (out - out.transpose())).eval();
  return out;
}

Vector vec(const Matrix& z) {
  return Eigen::Map<const Vector>(z.data(), z.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw DimensionError("unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Vector veck(const Matrix& omega) {
  require_even_square(omega, "veck");
  if (!is_skew(omega)) throw InvariantError("veck: input is not skew-symmetric");
  const Index m = omega.rows();
  Vector out(m * (m - 1) / 2);
  Index pos = 0;
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < j; ++i) out(pos++) = omega(i, j);
  return out;
}

Matrix unveck(const Vector& w, Index dim) {
  if (w.size() != dim * (dim - 1) / 2) throw DimensionError("unveck: size mismatch");
  Matrix out = Matrix::Zero(dim, dim);
  Index pos = 0;
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < j; ++i) {
      out(i, j) = w(pos);
      out(j, i) = -w(pos);
      ++pos;
    }
  return out;
}

Matrix duplication_matrix(Index k) {
  const Index m = 2 * k;
  Matrix d = Matrix::Zero(m * m, m * (m - 1) / 2);
  Index pos = 0;
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < j; ++i) {
      d(j * m + i, pos) = 1.0;   // entry (i, j) of vec
      d(i * m + j, pos) = -1.0;  // entry (j, i) of vec
      ++pos;
    }
  return d;
}

Matrix commutation_matrix(Index p, Index q) {
  Matrix out = Matrix::Zero(p * q, p * q);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < q; ++j) out(i * q + j, j * p + i) = 1.0;
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

// J v for a single column with 2m rows: [top; bottom] -> [bottom; -top].
Vector apply_j_col(const Vector& v) {
  const Index m = v.size() / 2;
  Vector out(v.size());
  out.head(m) = v.tail(m);
  out.tail(m) = -v.head(m);
  return out;
}

}  // namespace

SRFactors sr_decompose(const Matrix& a) {
  if (a.rows() % 2 != 0 || a.cols() % 2 != 0)
    throw DimensionError("sr_decompose: dimensions must be even");
  const Index k = a.cols() / 2;
  if (a.cols() > a.rows())
    throw DimensionError("sr_decompose: more columns than rows");

  const double breakdown_tol = 1e-13 * a.norm();
  Matrix s = a;
  Matrix r = Matrix::Zero(2 * k, 2 * k);

  // Subtracts the J-biorthogonal projection of column `col` onto the j
  // finished pairs, twice, accumulating the coefficients into R.
  auto orthogonalize = [&](Index j, Index col) {
    if (j == 0) return;
    for (int pass = 0; pass < 2; ++pass) {
      Vector w = apply_j_col(s.col(col));
      Vector t1 = s.leftCols(j).transpose() * w;        // s_i^T J v
      Vector t2 = s.middleCols(k, j).transpose() * w;   // s_{k+i}^T J v
      // v <- v - sum_i alpha_i s_i - sum_i beta_i s_{k+i}
      // with alpha_i = -t2_i and beta_i = t1_i.
      s.col(col) += s.leftCols(j) * t2 - s.middleCols(k, j) * t1;
      r.block(0, col, j, 1) -= t2;
      r.block(k, col, j, 1) += t1;
    }
  };

  for (Index j = 0; j < k; ++j) {
    orthogonalize(j, j);
    orthogonalize(j, k + j);
    const double pivot_product = s.col(j).dot(apply_j_col(s.col(k + j)));
    const double rjj = std::sqrt(std::abs(pivot_product));
    if (!(rjj > breakdown_tol))
      throw SrBreakdownError("sr_decompose: breakdown at pair " + std::to_string(j) +
                             " (pivot " + std::to_string(rjj) + ")");
    const double rkk = pivot_product / rjj;  // sign carries here, R(j,j) > 0
    s.col(j) /= rjj;
    s.col(k + j) /= rkk;
    r(j, j) = rjj;
    r(k + j, k + j) = rkk;
  }
  return {s, r};
}

Matrix symplectic_factor(const Matrix& a) { return sr_decompose(a).s; }

}  // namespace symplopt
