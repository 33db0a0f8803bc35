#pragma once

#include <functional>
#include <vector>

#include "symplopt/hessian.hpp"
#include "symplopt/retraction.hpp"

namespace symplopt::oracles {

/// Test-support oracles: independent routes to quantities the library
/// computes in closed form. Everything here goes through explicit dense
/// matrices, finite differences along SR-retracted curves, or brute-force
/// vectorized systems — never through the closed-form paths under test.

/// Feasible random draw with sigma(X) confined to [0.1, 10]; simplecticized
/// Gaussians occasionally reach condition numbers ~1e4-1e5, where the
/// finite-difference contracts below lose their accuracy budget.
SymplecticPoint moderate_random_point(ManifoldDims dims, std::uint64_t seed);

/// Dense weight matrix of the metric at x, built from the defining formula
/// ((1/rho) J X X^T J^T + I - X (X^TX)^{-1} X^T for the canonical-like
/// family, the constant weight otherwise).
Matrix explicit_weight_matrix(const Metric& metric, const SymplecticPoint& x);

/// Euclidean-orthonormal basis of the tangent space at x, one vec'd tangent
/// matrix per column (dimension 4nk - k(2k-1)).
Matrix tangent_basis(const SymplecticPoint& x);

/// Central finite difference of a matrix-valued function of the point,
/// along the SR-retracted curve t -> R_X(t Z); the step is
/// eps^(1/3) * (1 + ||X||) / (1 + ||Z||) unless overridden.
Matrix fd_point_derivative(const SymplecticPoint& x, const Matrix& z,
                           const std::function<Matrix(const SymplecticPoint&)>& f,
                           double step = -1);

/// D_Z P_X(Y) by finite differences of the metric's projection.
Matrix fd_projection_derivative(const Metric& metric, const SymplecticPoint& x,
                                const Matrix& z, const Matrix& y);

/// (D_Z M_X)(U) by finite differences of the explicit weight matrix.
Matrix fd_weight_derivative(const Metric& metric, const SymplecticPoint& x,
                            const Matrix& z, const Matrix& u);

/// The index-raising map by its defining duality, expanded in a tangent
/// basis with finite-difference weight derivatives.
Matrix fd_chi(const Metric& metric, const SymplecticPoint& x, const Matrix& z,
              const Matrix& u);

/// (1/2)(D_Z M(U) + D_U M(Z) - X(Z,U)) with every piece from finite
/// differences.
Matrix fd_kmap(const Metric& metric, const SymplecticPoint& x, const Matrix& z,
               const Matrix& u);

/// Full operator-framework Hessian assembly
///   P_X( M^{-1} hess_ambient[Z] + D_Z P(M^{-1} grad)
///        - M^{-1} D_Z M(M^{-1} grad) + M^{-1} K(Z, grad) )
/// with the derivative pieces from finite differences. Independent of the
/// closed-form Hessian implementations.
Matrix fd_hessian_framework(const Metric& metric, const SymplecticPoint& x,
                            const Matrix& z, const CostFunction& cost);

/// Second difference of t -> f(R_X(t Z)) at 0; matches the Hessian
/// quadratic form at critical points for first-order retractions.
double fd_second_difference(const CostFunction& cost, const SymplecticPoint& x,
                            const Matrix& z, RetractionKind kind = RetractionKind::kSr,
                            double step = -1);

/// Brute-force Lyapunov solve through the 4k^2 x 4k^2 vectorized system
/// (I x C + C^T x I) vec(W) = vec(rhs).
Matrix kron_lyapunov_solve(const Matrix& c, const Matrix& rhs);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// Closed form vs finite difference for each derivative lemma entering the
/// Hessian assemblies (diagnostics; the test contract is <= 1e-5 relative
/// agreement).
struct DerivativePair {
  Matrix closed_form;
  Matrix finite_difference;
  double relative_error() const;
};

struct DerivativeOracleBundle {
  DerivativePair projection_canonical;   // D_Z P under the canonical metric
  DerivativePair weight_canonical;       // (D_Z M)(U), canonical weight
  DerivativePair chi;                    // index-raising map
  DerivativePair kmap;                   // the K correction map
  DerivativePair projection_weighted;    // D_Z P under a constant weight
};

DerivativeOracleBundle derivative_oracles(const SymplecticPoint& x, const Matrix& z,
                                          const Matrix& u, const Matrix& y, double rho,
                                          const Metric& weighted);

}  // namespace symplopt::oracles
