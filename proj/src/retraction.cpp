#include "symplopt/retraction.hpp"

#include <Eigen/LU>

namespace symplopt {

namespace {
constexpr double kFeasGuard = 1e-9;

Matrix cayley_matrix(const SymplecticPoint& x, const Matrix& z) {
  const Matrix& xm = x.matrix();
  Matrix v = x.apply_px(z) + 2.0 * xm;  // P_X Z + 2X
  Matrix inner = Matrix::Identity(2 * x.k(), 2 * x.k()) +
                 0.25 * apply_j_t(z.transpose() * apply_j(v));
  Eigen::PartialPivLU<Matrix> lu(inner);
  if (lu.rcond() < 1e-14)
    throw RetractionDomainError("cayley: inner 2k x 2k matrix is numerically singular");
  Matrix out = -xm + v * lu.inverse();
  if (!out.allFinite()) throw RetractionDomainError("cayley: non-finite result");
  return out;
}
}  // namespace

const char* retraction_tag(RetractionKind kind) {
  return kind == RetractionKind::kCayley ? "Cay" : "SR";
}

RetractionKind retraction_from_tag(const std::string& tag) {
  if (tag == "Cay" || tag == "cay" || tag == "cayley") return RetractionKind::kCayley;
  if (tag == "SR" || tag == "sr") return RetractionKind::kSr;
  throw ConfigError("unknown retraction '" + tag + "'");
}

SymplecticPoint retract(RetractionKind kind, const SymplecticPoint& x, const Matrix& z,
                        RetractionStats* stats) {
  if (z.rows() != x.matrix().rows() || z.cols() != x.matrix().cols())
    throw DimensionError("retract: direction shape mismatch");
  if (z.isZero(0.0)) return x;

  Matrix candidate;
  if (kind == RetractionKind::kCayley) {
    candidate = cayley_matrix(x, z);
  } else {
    try {
      candidate = symplectic_factor(x.matrix() + z);
    } catch (const SrBreakdownError& e) {
      throw RetractionDomainError(std::string("sr retraction: ") + e.what());
    }
  }

  // Drift guard: a badly conditioned step can leave more residual than one
  // Gram-Schmidt sweep removes, so repair until the bound holds.
  bool repaired = false;
  for (int pass = 0; pass < 3 && feasibility(candidate) > kFeasGuard; ++pass) {
    try {
      candidate = symplectic_factor(candidate);
    } catch (const SrBreakdownError& e) {
      throw RetractionDomainError(std::string("retract: drift recovery failed: ") + e.what());
    }
    repaired = true;
  }
  if (feasibility(candidate) > kFeasGuard)
    throw RetractionDomainError("retract: output feasibility exceeds the guard");
  if (repaired && stats) ++stats->resymplecticized;
  return SymplecticPoint(std::move(candidate));
}

SymplecticPoint retract(RetractionKind kind, const TangentVector& z, RetractionStats* stats) {
  return retract(kind, z.base(), z.matrix(), stats);
}

}  // namespace symplopt
