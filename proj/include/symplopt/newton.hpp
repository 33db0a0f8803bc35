#pragma once

#include <utility>

#include "symplopt/hessian.hpp"

namespace symplopt {

struct NewtonSolveReport {
  enum class Method { kDirect, kKrylov };
  enum class Status { kConverged, kCapReached };
  Method method = Method::kDirect;
  Status status = Status::kConverged;
  int iterations = 0;        // Krylov inner iterations
  double residual_norm = 0;  // metric norm of Hess[Z] + grad, recomputed
  double forcing_target = 0;
  int coefficient_solves = 0;  // direct path: solves with the big block
};

/// Vectorized saddle-point form of the Newton equation,
///   [A B; C 0] [vec(Z); veck(Omega)] = [g; 0],
///   A = I x H - Omega_0^T x J,  B = -2 (I x J X) D,  C = B^T,
///   g = vec(-grad_ambient),
/// in the weight-free blocks (valid for the Euclidean and weighted
/// Euclidean metrics; H is the constant ambient Hessian, D the duplication
/// matrix, Omega_0 the projection multiplier of the gradient).
struct SaddleSystem {
  Matrix a;  // 4nk x 4nk
  Matrix b;  // 4nk x k(2k-1); the constraint block is b^T
  Vector g;  // 4nk
};
SaddleSystem build_saddle_system(const Metric& metric, const SymplecticPoint& x,
                                 const CostFunction& f);

/// Direct solution of Hess f(X)[Z] = -grad f(X) through the saddle system:
///   z = A^{-1} g - A^{-1} B (B^T A^{-1} B)^{-1} B^T A^{-1} g,
/// k(2k-1)+1 solves with A. Throws DirectSolveError on singular blocks or
/// when the cost has no constant ambient Hessian, and InvariantError for
/// the canonical-like metric (no direct path).
struct DirectNewtonSolution {
  TangentVector z;
  Matrix omega;  // the skew multiplier recovered from the elimination
  NewtonSolveReport report;
};
DirectNewtonSolution solve_newton_direct_detailed(const Metric& metric,
                                                  const SymplecticPoint& x,
                                                  const CostFunction& f);
TangentVector solve_newton_direct(const Metric& metric, const SymplecticPoint& x,
                                  const CostFunction& f, NewtonSolveReport* report = nullptr);

struct KrylovOptions {
  double eta = 1e-3;
  double mu = 0.5;
  int max_inner = -1;  // -1 selects the n*k default cap
};

/// Matrix-free solve of the operator Newton equation by a three-term
/// residual-minimizing recurrence (MINRES) run in the metric inner product;
/// the Hessian is self-adjoint there but typically indefinite away from
/// minima, which is why residual minimization is the right contract.
/// Every operator application is re-projected onto the tangent space to
/// control drift, and the final residual is re-verified independently of
/// the recurrence estimate (with a restart if it disagrees).
///
/// Stops at the forcing target min(eta, ||grad||^mu) * ||grad||; hitting
/// the iteration cap is a status, not an error — the best iterate is
/// returned either way.
std::pair<TangentVector, NewtonSolveReport> solve_newton_krylov(
    const HessianOperator& hess, const KrylovOptions& options = {});

std::pair<TangentVector, NewtonSolveReport> solve_newton_krylov(
    const Metric& metric, const SymplecticPoint& x, const CostFunction& f,
    const KrylovOptions& options = {});

}  // namespace symplopt
