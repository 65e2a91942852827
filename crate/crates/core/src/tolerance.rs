//! Numerical thresholds shared by every certificate.
//!
//! Each value is declared once here; modules refer to these names instead of
//! repeating literals.

/// Absolute entrywise bound on `|m - m*|` accepted as hermitian.
pub const HERMITIAN: f64 = 1e-13;

/// A hermitian matrix counts as positive semidefinite when its smallest
/// eigenvalue is at least `-POSITIVITY`.
pub const POSITIVITY: f64 = 1e-10;

/// Slack in the 2×2 Pauli positivity test `‖w‖ ≤ w₀`.
pub const PAULI_POSITIVITY: f64 = 1e-12;

/// Slack on `‖f‖ ≤ 1` for Bloch vectors.
pub const BALL: f64 = 1e-9;

/// Slack on the state-preservation bound `‖Δ*(φ⊗ψ)‖ ≤ 1`.
pub const STATE_PRESERVATION: f64 = 1e-9;

/// Slack on `‖V_ε(f)‖ ≤ 1` in the ball invariance check.
pub const BALL_INVARIANCE: f64 = 1e-9;

/// Slack on both Kadison-Schwarz necessary conditions.
pub const KS_NECESSARY: f64 = 1e-12;

/// Default violation threshold for the Kadison-Schwarz witness search.
pub const KS_SEARCH: f64 = 1e-8;

/// Slack on `|ε| ≤ 1/√3` when deciding whether dynamics are admissible.
pub const EPSILON_DOMAIN: f64 = 1e-9;

/// Relative residual `‖V(f) − f‖ / ‖f‖` below which a trajectory is stationary.
pub const STATIONARY: f64 = 1e-9;

/// Residual accepted for a reported fixed point.
pub const FIXED_POINT: f64 = 1e-12;
