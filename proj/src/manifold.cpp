#include "symplopt/manifold.hpp"

#include <Eigen/QR>
#include <cmath>

#include "symplopt/rng.hpp"

namespace symplopt {

namespace {

void require_even_rows(const Matrix& a, const char* who) {
  if (a.rows() % 2 != 0)
    throw DimensionError(std::string(who) + ": even row count required");
}

}  // namespace

Matrix apply_j(const Matrix& a) {
  require_even_rows(a, "apply_j");
  const Index m = a.rows() / 2;
  Matrix out(a.rows(), a.cols());
  out.topRows(m) = a.bottomRows(m);
  out.bottomRows(m) = -a.topRows(m);
  return out;
}

Matrix apply_j_t(const Matrix& a) {
  require_even_rows(a, "apply_j_t");
  const Index m = a.rows() / 2;
  Matrix out(a.rows(), a.cols());
  out.topRows(m) = -a.bottomRows(m);
  out.bottomRows(m) = a.topRows(m);
  return out;
}

Matrix right_j(const Matrix& a) {
  if (a.cols() % 2 != 0) throw DimensionError("right_j: even column count required");
  const Index m = a.cols() / 2;
  Matrix out(a.rows(), a.cols());
  out.leftCols(m) = -a.rightCols(m);
  out.rightCols(m) = a.leftCols(m);
  return out;
}

Matrix right_j_t(const Matrix& a) {
  if (a.cols() % 2 != 0) throw DimensionError("right_j_t: even column count required");
  const Index m = a.cols() / 2;
  Matrix out(a.rows(), a.cols());
  out.leftCols(m) = a.rightCols(m);
  out.rightCols(m) = -a.leftCols(m);
  return out;
}

Matrix poisson_matrix(Index m) {
  Matrix j = Matrix::Zero(2 * m, 2 * m);
  j.topRightCorner(m, m) = Matrix::Identity(m, m);
  j.bottomLeftCorner(m, m) = -Matrix::Identity(m, m);
  return j;
}

double feasibility(const Matrix& x) {
  if (x.rows() % 2 != 0 || x.cols() % 2 != 0)
    throw DimensionError("feasibility: even dimensions required");
  const Index k = x.cols() / 2;
  Matrix residual = x.transpose() * apply_j(x) - poisson_matrix(k);
  return residual.norm();
}

Matrix dfx(const Matrix& x, const Matrix& z) {
  Matrix xtjz = x.transpose() * apply_j(z);
  return xtjz - xtjz.transpose();
}

Matrix dfx_adjoint(const Matrix& x, const Matrix& omega) {
  if (!is_skew(omega)) throw InvariantError("dfx_adjoint: Omega must be skew-symmetric");
  return 2.0 * apply_j_t(x) * omega;
}

struct SymplecticPoint::Data {
  Matrix x;
  Index n = 0, k = 0;
  double feas = 0.0;
  Matrix xtx;
  Matrix jx;
  Eigen::LLT<Matrix> xtx_llt;

  mutable std::mutex mutex;
  mutable std::optional<Matrix> px;
  mutable std::optional<Matrix> xperp;
  mutable std::vector<std::pair<const void*, std::shared_ptr<const LyapunovSolver>>> lyap;
};

SymplecticPoint::SymplecticPoint(Matrix x, double feas_tol) {
  if (x.rows() % 2 != 0 || x.cols() % 2 != 0 || x.rows() < x.cols() || x.cols() == 0)
    throw DimensionError("SymplecticPoint: need a 2n x 2k matrix with n >= k >= 1");
  if (!x.allFinite()) throw InvariantError("SymplecticPoint: non-finite entries");
  auto data = std::make_shared<Data>();
  data->n = x.rows() / 2;
  data->k = x.cols() / 2;
  data->feas = symplopt::feasibility(x);
  if (data->feas > feas_tol)
    throw InvariantError("SymplecticPoint: feasibility " + std::to_string(data->feas) +
                         " exceeds tolerance " + std::to_string(feas_tol));
  data->xtx = x.transpose() * x;
  data->jx = apply_j(x);
  data->xtx_llt.compute(data->xtx);
  if (data->xtx_llt.info() != Eigen::Success)
    throw DefinitenessError("SymplecticPoint: X^T X factorization failed");
  data->x = std::move(x);
  data_ = std::move(data);
}

SymplecticPoint SymplecticPoint::canonical(ManifoldDims dims) {
  if (dims.k < 1 || dims.k > dims.n)
    throw DimensionError("SymplecticPoint::canonical: need 1 <= k <= n");
  Matrix x = Matrix::Zero(dims.rows(), dims.cols());
  x.block(0, 0, dims.k, dims.k).setIdentity();
  x.block(dims.n, dims.k, dims.k, dims.k).setIdentity();
  return SymplecticPoint(std::move(x));
}

const Matrix& SymplecticPoint::matrix() const { return data_->x; }
Index SymplecticPoint::n() const { return data_->n; }
Index SymplecticPoint::k() const { return data_->k; }
ManifoldDims SymplecticPoint::dims() const { return {data_->n, data_->k}; }
double SymplecticPoint::feasibility() const { return data_->feas; }
const Matrix& SymplecticPoint::xtx() const { return data_->xtx; }
const Matrix& SymplecticPoint::jx() const { return data_->jx; }

Matrix SymplecticPoint::xtx_solve(const Matrix& rhs) const {
  return data_->xtx_llt.solve(rhs);
}

Matrix SymplecticPoint::apply_px(const Matrix& y) const {
  // P_X Y = Y - X J_{2k} (X^T J^T Y); X^T J^T = (J X)^T.
  return y - right_j(data_->x) * (data_->jx.transpose() * y);
}

Matrix SymplecticPoint::apply_px_t(const Matrix& y) const {
  // P_X^T Y = Y - J X J_{2k}^T (X^T Y).
  return y - right_j_t(data_->jx) * (data_->x.transpose() * y);
}

Matrix SymplecticPoint::apply_pi_perp(const Matrix& y) const {
  return y - data_->x * xtx_solve(data_->x.transpose() * y);
}

const Matrix& SymplecticPoint::px() const {
  std::lock_guard<std::mutex> lock(data_->mutex);
  if (!data_->px) {
    const Index m = 2 * data_->n;
    data_->px = Matrix::Identity(m, m) - right_j(data_->x) * data_->jx.transpose();
  }
  return *data_->px;
}

const Matrix& SymplecticPoint::xperp() const {
  std::lock_guard<std::mutex> lock(data_->mutex);
  if (!data_->xperp) {
    const Index rows = 2 * data_->n;
    const Index rank = 2 * data_->k;
    const Index complement = rows - rank;
    Eigen::HouseholderQR<Matrix> qr(data_->x);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, rows);
    Matrix q2 = q.rightCols(complement);
    if (complement == 0) {
      data_->xperp = Matrix(rows, 0);
      return *data_->xperp;
    }
    // Renormalize within range(X)^perp so that X_perp (X_perp^T J X_perp)^{-1}
    // has orthonormal columns: with B = Q2^T J Q2 (skew, nonsingular on a
    // feasible point's complement), X_perp = Q2 T needs T T^T = (B B^T)^{-1}.
    Matrix b = q2.transpose() * apply_j(q2);
    Matrix bbt = b * b.transpose();
    Eigen::LLT<Matrix> llt(bbt);
    if (llt.info() != Eigen::Success)
      throw FrameError("xperp: complement symplectic form is numerically singular");
    Matrix t = llt.matrixU().solve(Matrix::Identity(complement, complement));
    data_->xperp = q2 * t;
  }
  return *data_->xperp;
}

std::shared_ptr<const LyapunovSolver> SymplecticPoint::cached_lyapunov(
    const void* key, const std::function<Matrix()>& coefficient) const {
  {
    std::lock_guard<std::mutex> lock(data_->mutex);
    for (const auto& entry : data_->lyap)
      if (entry.first == key) return entry.second;
  }
  auto solver = std::make_shared<const LyapunovSolver>(coefficient());
  std::lock_guard<std::mutex> lock(data_->mutex);
  for (const auto& entry : data_->lyap)
    if (entry.first == key) return entry.second;
  data_->lyap.emplace_back(key, solver);
  return solver;
}

Matrix project_canonical(const SymplecticPoint& x, const Matrix& y) {
  Matrix s = skew_part(x.jx().transpose() * y);  // skew(X^T J^T Y)
  return y - right_j(x.matrix()) * s;
}

TangentVector::TangentVector(SymplecticPoint base, Matrix z)
    : base_(std::move(base)), z_(std::move(z)) {
  if (z_.rows() != base_.matrix().rows() || z_.cols() != base_.matrix().cols())
    throw DimensionError("TangentVector: shape mismatch with base point");
  const double residual = dfx(base_.matrix(), z_).norm();
  if (residual > 1e-8 * (1.0 + z_.norm()))
    throw InvariantError("TangentVector: tangency residual " + std::to_string(residual));
}

TangentVector TangentVector::unchecked(SymplecticPoint base, Matrix z) {
  return TangentVector(Unchecked{}, std::move(base), std::move(z));
}

double TangentVector::tangency_residual() const {
  return dfx(base_.matrix(), z_).norm();
}

SymplecticPoint random_point(ManifoldDims dims, std::uint64_t seed) {
  if (dims.k < 1 || dims.k > dims.n)
    throw DimensionError("random_point: need 1 <= k <= n");
  Rng rng(seed);
  for (int attempt = 0; attempt < 5; ++attempt) {
    Matrix draw = rng.gaussian_matrix(dims.rows(), dims.cols());
    try {
      return SymplecticPoint(symplectic_factor(draw));
    } catch (const SrBreakdownError&) {
      continue;
    }
  }
  throw SrBreakdownError("random_point: SR decomposition kept breaking down");
}

TangentVector random_tangent(const SymplecticPoint& x, std::uint64_t seed) {
  Rng rng(seed);
  Matrix draw = rng.gaussian_matrix(x.matrix().rows(), x.matrix().cols());
  return TangentVector::unchecked(x, project_canonical(x, draw));
}

}  // namespace symplopt
