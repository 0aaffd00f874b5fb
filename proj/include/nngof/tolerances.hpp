#pragma once

// Central numeric tolerance constants. Every hard-coded comparison threshold
// used by the library lives here so the values are documented in one place.

namespace nngof::tol {

// Relative asymmetry allowed when validating a symmetric matrix input.
inline constexpr double kSymmetryRel = 1e-10;

// Relative Frobenius error allowed for V * diag(lambda) * V^T reconstruction.
inline constexpr double kReconstructionRel = 1e-8;

// Relative Frobenius error allowed for sqrt(S)*sqrt(S) = S and
// inv_sqrt(S)*S*inv_sqrt(S) = I round trips.
inline constexpr double kSqrtRel = 1e-6;

// Consistency required between a whitening map and the scatter it came from.
inline constexpr double kWhitenRel = 1e-6;

// Condition number above which inv_sqrt refuses to proceed.
inline constexpr double kMaxCondition = 1e12;

// Absolute tolerance on the norm of a sampled unit vector.
inline constexpr double kUnitNormAbs = 1e-12;

// Quadratic forms below this count as a zero denominator in fixed-point loops.
inline constexpr double kZeroDenominator = 1e-300;

// Default convergence tolerance (relative Frobenius between iterates) for the
// regularized scatter fixed point.
inline constexpr double kTylerTol = 1e-8;
inline constexpr int kTylerMaxIter = 500;

// Spatial median: stop when the objective gradient norm falls below
// kMedianTol * n.
inline constexpr double kMedianTol = 1e-7;
inline constexpr int kMedianMaxIter = 500;

// Shape estimation: bisection bracket and tolerance. The lower edge keeps the
// fitted reference shell thin enough for the NN statistic to resolve radial
// mismatch in moderate dimensions; alternatives with diverging kurtosis clamp
// here (flagged) instead of dragging the reference into a degenerate
// fat-shell regime.
inline constexpr double kBetaLower = 0.2;
inline constexpr double kBetaUpper = 10.0;
inline constexpr double kBetaTol = 1e-6;
inline constexpr int kBetaMaxIter = 200;

// Numeric-safety envelope for the shape parameter itself.
inline constexpr double kShapeMin = 0.01;
inline constexpr double kShapeMax = 100.0;

// Condition number above which fit diagnostics flag the scatter as
// poorly conditioned (warning only, not an error).
inline constexpr double kConditionWarn = 1e8;

}  // namespace nngof::tol
