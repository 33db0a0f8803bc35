#pragma once

#include <memory>

#include "symplopt/cost.hpp"
#include "symplopt/manifold.hpp"

namespace symplopt {

/// A tractable metric g(Z1, Z2) = <Z1, M_X Z2> with spd weight M_X:
///   canonical-like     M_X = (1/rho) J X X^T J^T + (I - X (X^T X)^{-1} X^T)
///   Euclidean          M_X = I
///   weighted Euclidean M_X = M constant spd
/// The canonical-like paths never materialize M_X; they use the closed
/// forms M_X^{-1} Y = rho X X^T Y + P_X P_X^T Y and the rho-independent
/// projection. Metrics are immutable values; copies share the weight data.
class Metric {
 public:
  enum class Kind { kCanonicalLike, kEuclidean, kWeightedEuclidean };

  static Metric canonical_like(double rho = 1.0);
  static Metric euclidean();
  /// Validates symmetry (1e-12 relative) and positive definiteness; the
  /// Cholesky factor is cached once and reused by every inverse apply.
  static Metric weighted_euclidean(Matrix m);

  Kind kind() const { return kind_; }
  double rho() const { return rho_; }
  const Matrix& weight() const;

  /// Short scheme tag: "c", "e" or "M".
  const char* tag() const;

  double inner(const SymplecticPoint& x, const Matrix& z1, const Matrix& z2) const;
  double norm(const SymplecticPoint& x, const Matrix& z) const;
  double norm(const TangentVector& z) const { return norm(z.base(), z.matrix()); }

  /// M_X Y.
  Matrix m_apply(const SymplecticPoint& x, const Matrix& y) const;
  /// M_X^{-1} Y.
  Matrix minv_apply(const SymplecticPoint& x, const Matrix& y) const;

  /// Coefficient X^T J^T M_X^{-1} J X of the projection Lyapunov equation.
  Matrix lyapunov_coefficient(const SymplecticPoint& x) const;
  /// Solves (X^T J^T M^{-1} J X) W + W (X^T J^T M^{-1} J X) = rhs with the
  /// factorization cached on the point.
  Matrix solve_lyapunov(const SymplecticPoint& x, const Matrix& rhs) const;

  /// The skew matrix Omega_{X,Y} solving Lyap(Omega) = 2 skew(X^T J^T Y).
  Matrix omega_for(const SymplecticPoint& x, const Matrix& y) const;

  /// Orthogonal projection of an ambient Y onto the tangent space,
  /// Y - M^{-1} J X Omega_{X,Y}; rho-independent closed form for the
  /// canonical-like metric.
  Matrix project_tangent_matrix(const SymplecticPoint& x, const Matrix& y) const;
  TangentVector project_tangent(const SymplecticPoint& x, const Matrix& y) const;

  /// grad f(X) = P_X(M_X^{-1} grad_ambient f(X)).
  TangentVector riemannian_gradient(const SymplecticPoint& x, const CostFunction& f) const;
  Matrix riemannian_gradient_matrix(const SymplecticPoint& x, const Matrix& ambient_gradient) const;

 private:
  Metric(Kind kind, double rho, std::shared_ptr<const Matrix> m);
  const void* cache_key() const;

  Kind kind_;
  double rho_ = 1.0;
  std::shared_ptr<const Matrix> m_;
  std::shared_ptr<const Eigen::LLT<Matrix>> m_llt_;
};

}  // namespace symplopt
