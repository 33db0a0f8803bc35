#include "symplopt/metric.hpp"

#include <cmath>

namespace symplopt {

namespace {
// Cache key for the Euclidean coefficient X^T X.
const int kEuclideanKey = 0;
}  // namespace

Metric::Metric(Kind kind, double rho, std::shared_ptr<const Matrix> m)
    : kind_(kind), rho_(rho), m_(std::move(m)) {}

Metric Metric::canonical_like(double rho) {
  if (!(rho > 0.0)) throw DefinitenessError("Metric: rho must be positive");
  return Metric(Kind::kCanonicalLike, rho, nullptr);
}

Metric Metric::euclidean() { return Metric(Kind::kEuclidean, 1.0, nullptr); }

Metric Metric::weighted_euclidean(Matrix m) {
  if (m.rows() != m.cols()) throw DimensionError("Metric: weight must be square");
  if ((m - m.transpose()).norm() > 1e-12 * (1.0 + m.norm()))
    throw InvariantError("Metric: weight must be symmetric");
  auto shared = std::make_shared<const Matrix>(0.5 * (m + m.transpose()));
  auto llt = std::make_shared<Eigen::LLT<Matrix>>(*shared);
  if (llt->info() != Eigen::Success)
    throw DefinitenessError("Metric: weight is not positive definite");
  Metric out(Kind::kWeightedEuclidean, 1.0, shared);
  out.m_llt_ = std::move(llt);
  return out;
}

const Matrix& Metric::weight() const {
  if (kind_ != Kind::kWeightedEuclidean)
    throw InvariantError("Metric::weight: only the weighted Euclidean metric has one");
  return *m_;
}

const char* Metric::tag() const {
  switch (kind_) {
    case Kind::kCanonicalLike: return "c";
    case Kind::kEuclidean: return "e";
    case Kind::kWeightedEuclidean: return "M";
  }
  return "?";
}

const void* Metric::cache_key() const {
  if (kind_ == Kind::kWeightedEuclidean) return m_.get();
  return &kEuclideanKey;
}

double Metric::inner(const SymplecticPoint& x, const Matrix& z1, const Matrix& z2) const {
  switch (kind_) {
    case Kind::kEuclidean:
      return (z1.array() * z2.array()).sum();
    case Kind::kWeightedEuclidean:
      return (z1.array() * (*m_ * z2).array()).sum();
    case Kind::kCanonicalLike: {
      // (1/rho) <X^T J^T Z1, X^T J^T Z2> + <Z1, Z2> - <X^T Z1, (X^TX)^{-1} X^T Z2>
      Matrix w1 = x.jx().transpose() * z1;
      Matrix w2 = x.jx().transpose() * z2;
      Matrix u1 = x.matrix().transpose() * z1;
      Matrix u2 = x.matrix().transpose() * z2;
      double value = (w1.array() * w2.array()).sum() / rho_;
      value += (z1.array() * z2.array()).sum();
      value -= (u1.array() * x.xtx_solve(u2).array()).sum();
      return value;
    }
  }
  return 0.0;
}

double Metric::norm(const SymplecticPoint& x, const Matrix& z) const {
  return std::sqrt(std::max(0.0, inner(x, z, z)));
}

Matrix Metric::m_apply(const SymplecticPoint& x, const Matrix& y) const {
  switch (kind_) {
    case Kind::kEuclidean:
      return y;
    case Kind::kWeightedEuclidean:
      return *m_ * y;
    case Kind::kCanonicalLike:
      return x.jx() * (x.jx().transpose() * y) / rho_ + x.apply_pi_perp(y);
  }
  return y;
}

Matrix Metric::minv_apply(const SymplecticPoint& x, const Matrix& y) const {
  switch (kind_) {
    case Kind::kEuclidean:
      return y;
    case Kind::kWeightedEuclidean:
      return m_llt_->solve(y);
    case Kind::kCanonicalLike:
      // rho X X^T Y + P_X P_X^T Y
      return rho_ * (x.matrix() * (x.matrix().transpose() * y)) +
             x.apply_px(x.apply_px_t(y));
  }
  return y;
}

Matrix Metric::lyapunov_coefficient(const SymplecticPoint& x) const {
  switch (kind_) {
    case Kind::kEuclidean:
      return x.xtx();
    case Kind::kWeightedEuclidean: {
      Matrix w = m_llt_->solve(x.jx());
      Matrix c = x.jx().transpose() * w;
      return 0.5 * (c + c.transpose());
    }
    case Kind::kCanonicalLike:
      // Collapses to rho I: X^T J^T M^{-1} J X with M^{-1} J X = rho X J_{2k}.
      return rho_ * Matrix::Identity(2 * x.k(), 2 * x.k());
  }
  return Matrix();
}

Matrix Metric::solve_lyapunov(const SymplecticPoint& x, const Matrix& rhs) const {
  if (kind_ == Kind::kCanonicalLike) return rhs / (2.0 * rho_);
  auto solver = x.cached_lyapunov(cache_key(), [&] { return lyapunov_coefficient(x); });
  return solver->solve(rhs);
}

Matrix Metric::omega_for(const SymplecticPoint& x, const Matrix& y) const {
  Matrix rhs = x.jx().transpose() * y;  // X^T J^T Y
  rhs = (rhs - rhs.transpose()).eval();    // 2 skew(.)
  Matrix omega = solve_lyapunov(x, rhs);
  return 0.5 * (omega - omega.transpose());
}

Matrix Metric::project_tangent_matrix(const SymplecticPoint& x, const Matrix& y) const {
  if (kind_ == Kind::kCanonicalLike) return project_canonical(x, y);
  return y - minv_apply(x, x.jx() * omega_for(x, y));
}

TangentVector Metric::project_tangent(const SymplecticPoint& x, const Matrix& y) const {
  return TangentVector::unchecked(x, project_tangent_matrix(x, y));
}

Matrix Metric::riemannian_gradient_matrix(const SymplecticPoint& x,
                                          const Matrix& ambient_gradient) const {
  if (kind_ == Kind::kCanonicalLike) {
    // rho X J sym(J^T X^T G) + P_X P_X^T G
    Matrix s = sym_part(apply_j_t(x.matrix().transpose() * ambient_gradient));
    return rho_ * right_j(x.matrix()) * s + x.apply_px(x.apply_px_t(ambient_gradient));
  }
  Matrix y = minv_apply(x, ambient_gradient);
  return y - minv_apply(x, x.jx() * omega_for(x, y));
}

TangentVector Metric::riemannian_gradient(const SymplecticPoint& x,
                                          const CostFunction& f) const {
  return TangentVector::unchecked(
      x, riemannian_gradient_matrix(x, f.gradient(x.matrix())));
}

}  // namespace symplopt
