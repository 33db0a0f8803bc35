#pragma once

#include <Eigen/Dense>

#include "symplopt/errors.hpp"

namespace symplopt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Symmetric part (A + A^T)/2. Throws DimensionError for non-square input.
Matrix sym_part(const Matrix& a);

/// Skew-symmetric part (A - A^T)/2. Throws DimensionError for non-square input.
Matrix skew_part(const Matrix& a);

bool is_skew(const Matrix& a, double tol = 1e-12);

/// Solves C*Omega + Omega*C = rhs for an spd coefficient C via the symmetric
/// eigendecomposition C = Q diag(lambda) Q^T:
///   Omega = Q ( (Q^T rhs Q)_ij / (lambda_i + lambda_j) ) Q^T.
/// The factorization is reusable across right-hand sides, which is the hot
/// pattern in projections and Hessian applications.
class LyapunovSolver {
 public:
  /// Throws InvariantError if C is not symmetric to 1e-12 relative and
  /// DefinitenessError if any eigenvalue is <= 0.
  explicit LyapunovSolver(const Matrix& c);

  Matrix solve(const Matrix& rhs) const;

  const Matrix& coefficient() const { return c_; }

 private:
  Matrix c_;
  Matrix q_;
  Vector lambda_;
};

/// One-shot convenience wrapper around LyapunovSolver.
/// A skew-symmetric right-hand side yields a skew-symmetric solution;
/// the output is skew-projected in that case to pin the invariant.
Matrix solve_lyapunov_spd(const Matrix& c, const Matrix& rhs);

// Column-major vectorization calculus. The vec convention is fixed
// column-major project-wide; the identities below assume it.

Vector vec(const Matrix& z);
Matrix unvec(const Vector& v, Index rows, Index cols);

/// Stacks the strictly upper triangular entries of a skew-symmetric matrix
/// column by column. Throws InvariantError if the input is not skew.
Vector veck(const Matrix& omega);
Matrix unveck(const Vector& w, Index dim);

/// Duplication matrix D with vec(Omega) = D * veck(Omega) for skew Omega
/// of size 2k x 2k. Satisfies veck(Omega) = (1/2) D^T vec(Omega) and
/// D^T = -D^T P_{2k,2k}.
Matrix duplication_matrix(Index k);

/// Commutation matrix P_{p,q} with vec(Z^T) = P_{p,q} vec(Z) for p x q Z.
Matrix commutation_matrix(Index p, Index q);

Matrix kron(const Matrix& a, const Matrix& b);

/// SR factors A = S * R with S symplectic and R in the normalized
/// triangular class: R is upper triangular in the interleaved column order
/// (1, k+1, 2, k+2, ...) with R(j, k+j) = 0 and |R(k+j, k+j)| = R(j, j) > 0.
struct SRFactors {
  Matrix s;
  Matrix r;
};

/// Modified (re-orthogonalizing) symplectic Gram-Schmidt with the sign
/// convention R(j, j) > 0, which makes the decomposition unique.
/// Throws SrBreakdownError when a pivot falls below 1e-13 * ||A||_F.
SRFactors sr_decompose(const Matrix& a);

/// The symplectic factor S of the SR decomposition.
Matrix symplectic_factor(const Matrix& a);

}  // namespace symplopt
