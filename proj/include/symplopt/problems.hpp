#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "symplopt/cost.hpp"
#include "symplopt/manifold.hpp"

namespace symplopt {

/// f(X) = (1/2) ||A X - B||_F^2 with nonsingular A.
/// Ambient gradient A^T A X - A^T B, ambient Hessian action A^T A Z.
/// Rejects A with an estimated condition number above 1e14.
std::shared_ptr<CostFunction> least_squares_problem(const Matrix& a, const Matrix& b);

/// f(X) = (1/2) tr(X^T A X) with spd A; gradient A X, Hessian action A Z.
std::shared_ptr<CostFunction> trace_problem(const Matrix& a);

/// f(X) = (1/2) tr(X^T A X X^T B X) with spd A, B; square case (k = n) only.
/// No constant ambient Hessian is exposed.
std::shared_ptr<CostFunction> quartic_trace_problem(const Matrix& a, const Matrix& b);

/// A generated experiment instance: the cost, a feasible start, and
/// whatever is known about the optimum. Instances regenerate the reference
/// constructions structurally (block layout, spd-ness, symplectic factors,
/// normalization) from this library's own seeded generator; they are not
/// bit-identical to any external random stream.
struct ProblemInstance {
  std::shared_ptr<CostFunction> cost;
  SymplecticPoint x0;
  ManifoldDims dims;
  std::string family;
  std::optional<Matrix> known_minimizer;
  std::optional<double> known_minimum;
  Matrix a;  // generator data, kept for reuse (metric weights, diagnostics)
  Matrix b;
};

/// Least squares with A = [I A1; A2 I + A2 A1] (A1, A2 random symmetric,
/// scaled by 0.1), which is symplectic by construction, and a simplecticized
/// random right-hand side B. The unique minimizer J^T A^T J B is recorded.
ProblemInstance make_least_squares_instance(Index n, Index k, std::uint64_t seed);

/// Trace minimization with A = S^T D S, D = diag(1..n, 1..n) and a random
/// symplectic block factor S built from sparse-ish spd blocks; the smallest
/// k symplectic eigenvalues of A are 1..k, so the minimum is k(k+1)/2.
/// Starts from the block identity point.
ProblemInstance make_trace_instance(Index n, Index k, std::uint64_t seed);

/// Trace instance with a synthetic weakly damped gyroscopic generator in
/// place of external model data: A = J H / ||J H||_F for a Hamiltonian H
/// built from a stiffness/gyroscopic/damping block structure. The minimum
/// is unknown; reports label the data as synthetic.
ProblemInstance make_gyroscopic_trace_instance(Index n, Index k, std::uint64_t seed);

/// Quartic trace instance (k = n): A = A1^T A1, B = B1^T B1 normalized,
/// started from an orthogonal-symplectic block point.
ProblemInstance make_quartic_instance(Index n, std::uint64_t seed);

/// Random spd matrix with reciprocal condition number rcond built by
/// random Jacobi rotations of a diagonal matrix; about `rotations` plane
/// rotations keep it sparse-ish.
Matrix random_jacobi_spd(Index m, double rcond, Index rotations, std::uint64_t seed);

}  // namespace symplopt
