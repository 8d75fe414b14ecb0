//! Centralized numerical tolerances.
//!
//! Every hard-coded threshold used by the library lives here, with a note on
//! what it guards.  Test-only tolerances (statistical slack, oracle agreement
//! bands) stay next to the tests that use them.

/// Max-norm bound on `Qᵀ Q − Id` accepted for an orthonormal matrix or frame.
/// Householder QR on well-conditioned input lands around `n · ε ≈ 1e-14`;
/// anything above this signals a broken construction, not round-off.
pub const ORTHONORMALITY_TOL: f64 = 1e-12;

/// Hard floor for pivots and triangular diagonals.  A magnitude below this is
/// treated as exact rank collapse rather than a small number.
pub const PIVOT_FLOOR: f64 = 1e-300;

/// Relative tolerance (against the operator max-norm) for deciding that a
/// subspace is invariant: the off-block residual `‖π_{g⊥} B g‖_max` must not
/// exceed `INVARIANCE_REL_TOL · ‖B‖_max`.
pub const INVARIANCE_REL_TOL: f64 = 1e-8;

/// Relative tolerance (against the spectral radius) below which two
/// eigenvalues count as colliding, making subset selection ill-defined.
pub const SPECTRUM_COLLISION_REL_TOL: f64 = 1e-8;

/// Fraction of degenerate-spectrum rejections above which a Monte Carlo run
/// over random products is flagged as untrustworthy.
pub const REJECTION_FLAG_RATE: f64 = 1e-3;

/// Slack allowed below `1` when checking the series value at `u = 1`, which
/// is exactly `≥ 1` in exact arithmetic.
pub const J_AT_ONE_SLACK: f64 = 1e-9;
