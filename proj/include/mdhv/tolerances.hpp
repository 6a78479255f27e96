#pragma once

namespace mdhv::tol {

/// Structural checks: norms, hermiticity, POVM completeness, projector algebra.
inline constexpr double kStructural = 1e-9;

/// Closed-form arithmetic identities (sums of exact probabilities etc).
inline constexpr double kArithmetic = 1e-12;

/// A density at or below this value is treated as outside the support.
inline constexpr double kSupport = 1e-12;

/// Qubit-pair settings with |1 - |a.b|| below this use the aligned/antialigned limit.
inline constexpr double kDegenerateSetting = 1e-9;

/// Number of standard errors that separates a statistical zero from a hit.
inline constexpr double kStatSigmas = 5.0;

}  // namespace mdhv::tol
