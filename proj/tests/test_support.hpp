#pragma once

#include <vector>

#include "symplopt/cost.hpp"
#include "symplopt/manifold.hpp"
#include "symplopt/retraction.hpp"
#include "symplopt/rng.hpp"

namespace symplopt::testing {

inline Matrix random_spd(Rng& rng, Index m, double shift = 0.5) {
  Matrix a = rng.gaussian_matrix(m, m);
  return a * a.transpose() / static_cast<double>(m) + shift * Matrix::Identity(m, m);
}

inline Matrix random_symmetric(Rng& rng, Index m) {
  Matrix a = rng.gaussian_matrix(m, m);
  return 0.5 * (a + a.transpose());
}

inline Matrix random_skew(Rng& rng, Index m) {
  Matrix a = rng.gaussian_matrix(m, m);
  return 0.5 * (a - a.transpose());
}

inline double rel_err(const Matrix& got, const Matrix& want) {
  return (got - want).norm() / std::max(1e-300, want.norm());
}

/// A feasible point with cond(X^T X) = O(1): a moderate tangent step from
/// the block identity. Simplecticized Gaussian draws can reach cond ~ 1e5,
/// which caps achievable identity precision near 1e-10; the tightest oracle
/// checks use this instead.
inline SymplecticPoint well_conditioned_point(ManifoldDims dims, std::uint64_t seed) {
  SymplecticPoint base = SymplecticPoint::canonical(dims);
  TangentVector z = random_tangent(base, seed);
  Matrix direction = z.matrix() * (0.3 * std::sqrt(double(2 * dims.k)) / z.matrix().norm());
  return retract(RetractionKind::kSr, base, direction);
}

/// Interleaving permutation (columns e_1, e_3, ..., e_2, e_4, ...) used by
/// the normalized triangular class of the SR decomposition.
inline Matrix sr_permutation(Index k) {
  Matrix p = Matrix::Zero(2 * k, 2 * k);
  for (Index i = 0; i < k; ++i) {
    p(2 * i, i) = 1.0;          // column i is e_{2i}
    p(2 * i + 1, k + i) = 1.0;  // column k+i is e_{2i+1}
  }
  return p;
}

/// Random member of the normalized triangular class: upper triangular in
/// the interleaved order with R(j, k+j) = 0 and |R(k+j, k+j)| = R(j, j) > 0.
inline Matrix random_normalized_triangular(Rng& rng, Index k) {
  Matrix hat = Matrix::Zero(2 * k, 2 * k);
  for (Index j = 0; j < 2 * k; ++j)
    for (Index i = 0; i <= j; ++i) hat(i, j) = rng.normal();
  for (Index j = 0; j < k; ++j) {
    hat(2 * j, 2 * j) = 0.5 + rng.uniform01();
    hat(2 * j, 2 * j + 1) = 0.0;
    hat(2 * j + 1, 2 * j + 1) =
        (rng.uniform01() < 0.5 ? -1.0 : 1.0) * hat(2 * j, 2 * j);
  }
  Matrix p = sr_permutation(k);
  return p.transpose() * hat * p;
}

/// Identically zero objective: the one cost whose ambient gradient is a
/// bitwise zero matrix (floating-point evaluation of any nontrivial cost
/// cannot deliver that even at an exact minimizer).
class StationaryCost final : public CostFunction {
 public:
  double value(const Matrix&) const override { return 0.0; }
  Matrix gradient(const Matrix& x) const override {
    return Matrix::Zero(x.rows(), x.cols());
  }
  Matrix hessian_apply(const Matrix&, const Matrix& z) const override { return z; }
};

}  // namespace symplopt::testing
