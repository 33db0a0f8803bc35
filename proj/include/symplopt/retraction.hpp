#pragma once

#include "symplopt/manifold.hpp"

namespace symplopt {

enum class RetractionKind { kCayley, kSr };

const char* retraction_tag(RetractionKind kind);  // "Cay" / "SR"
RetractionKind retraction_from_tag(const std::string& tag);

struct RetractionStats {
  int resymplecticized = 0;  // outputs that needed an extra SR pass
};

/// Moves from X along the tangent direction Z and lands on the manifold.
///
/// Cayley: economical form
///   -X + (P_X Z + 2X)(I_{2k} + (1/4) J_{2k}^T Z^T J_{2n} (P_X Z + 2X))^{-1},
/// a 2k x 2k solve only. A singular inner matrix raises
/// RetractionDomainError (line searches shrink the step on it).
///
/// SR: the symplectic factor of X + Z; SR breakdown raises
/// RetractionDomainError.
///
/// Outputs drift beyond 1e-9 in feasibility are re-symplecticized through
/// one SR pass and counted in `stats`.
SymplecticPoint retract(RetractionKind kind, const SymplecticPoint& x, const Matrix& z,
                        RetractionStats* stats = nullptr);

SymplecticPoint retract(RetractionKind kind, const TangentVector& z,
                        RetractionStats* stats = nullptr);

}  // namespace symplopt
