#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "symplopt/dense.hpp"

namespace symplopt {

/// Sizes of the manifold of 2n x 2k symplectic matrices.
struct ManifoldDims {
  Index n = 0;
  Index k = 0;
  Index rows() const { return 2 * n; }
  Index cols() const { return 2 * k; }
  Index dimension() const { return 4 * n * k - k * (2 * k - 1); }
};

/// J_{2m} A computed by block row swap and negation; no matrix is formed.
Matrix apply_j(const Matrix& a);
/// J_{2m}^T A = -J_{2m} A.
Matrix apply_j_t(const Matrix& a);
/// A J_{2k} computed by block column swap and negation.
Matrix right_j(const Matrix& a);
/// A J_{2k}^T.
Matrix right_j_t(const Matrix& a);
/// Dense J_{2m} (small sizes and oracle tests only).
Matrix poisson_matrix(Index m);

/// Constraint violation ||X^T J X - J||_F; zero exactly on the manifold.
double feasibility(const Matrix& x);

/// D F_X(Z) = X^T J Z + Z^T J X; skew-symmetric, zero exactly on tangents.
Matrix dfx(const Matrix& x, const Matrix& z);
/// Adjoint of D F_X under the trace inner product: 2 J^T X Omega.
/// Throws InvariantError for non-skew Omega.
Matrix dfx_adjoint(const Matrix& x, const Matrix& omega);

/// A feasible point with cached derived quantities. Copies are cheap
/// (shared immutable state); lazy caches are internally synchronized, so
/// points may be shared freely across threads.
class SymplecticPoint {
 public:
  /// Validates ||X^T J X - J||_F <= feas_tol; throws InvariantError otherwise.
  explicit SymplecticPoint(Matrix x, double feas_tol = 1e-8);

  /// The block identity point [I_{n,k} 0; 0 I_{n,k}].
  static SymplecticPoint canonical(ManifoldDims dims);

  const Matrix& matrix() const;
  Index n() const;
  Index k() const;
  ManifoldDims dims() const;
  double feasibility() const;

  const Matrix& xtx() const;
  const Matrix& jx() const;
  /// (X^T X)^{-1} rhs through the cached Cholesky factor.
  Matrix xtx_solve(const Matrix& rhs) const;

  /// Oblique tangent projector P_X = I - X J_{2k} X^T J_{2n}^T in operator
  /// form; production formulas use these instead of the dense matrix.
  Matrix apply_px(const Matrix& y) const;
  Matrix apply_px_t(const Matrix& y) const;
  /// Orthogonal projector onto range(X)^perp: Y - X (X^T X)^{-1} X^T Y.
  Matrix apply_pi_perp(const Matrix& y) const;

  /// Dense P_X, materialized lazily.
  const Matrix& px() const;

  /// Orthogonal-complement frame X_perp with X^T X_perp = 0, normalized so
  /// that (X_perp (X_perp^T J X_perp)^{-1}) has orthonormal columns, which
  /// gives J X_perp X_perp^T J^T = P_X P_X^T. Lazy; only oracle tests need
  /// it, production formulas use P_X P_X^T.
  const Matrix& xperp() const;

  /// Per-point Lyapunov factorization cache, keyed by metric identity.
  std::shared_ptr<const LyapunovSolver> cached_lyapunov(
      const void* key, const std::function<Matrix()>& coefficient) const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

/// Tangent projection Y - X J_{2k} skew(X^T J^T Y). This is the orthogonal
/// projection under the canonical-like metric for every rho, and a cheap
/// exact tangentizer in general.
Matrix project_canonical(const SymplecticPoint& x, const Matrix& y);

/// An ambient matrix tied to a base point, satisfying the tangency identity
/// ||X^T J Z + Z^T J X||_F <= 1e-8 (1 + ||Z||_F).
class TangentVector {
 public:
  TangentVector(SymplecticPoint base, Matrix z);
  /// Skips the tangency check (hot paths that construct tangents by
  /// projection).
  static TangentVector unchecked(SymplecticPoint base, Matrix z);

  const SymplecticPoint& base() const { return base_; }
  const Matrix& matrix() const { return z_; }
  double tangency_residual() const;

 private:
  struct Unchecked {};
  TangentVector(Unchecked, SymplecticPoint base, Matrix z)
      : base_(std::move(base)), z_(std::move(z)) {}
  SymplecticPoint base_;
  Matrix z_;
};

/// Gaussian draw simplecticized through the SR decomposition; deterministic
/// for a fixed seed. Retries a fresh draw on SR breakdown (at most 5 times).
SymplecticPoint random_point(ManifoldDims dims, std::uint64_t seed);

/// Projection of a Gaussian draw onto the tangent space at x.
TangentVector random_tangent(const SymplecticPoint& x, std::uint64_t seed);

}  // namespace symplopt
