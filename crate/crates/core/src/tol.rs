//! Global numerical tolerances.
//!
//! Every support decision in the crate goes through [`RANK_TOL`], so the
//! relation `ω ≪ φ` is decided the same way by every module.

/// Eigenvalues below `RANK_TOL * λ_max` are treated as exact kernel.
pub const RANK_TOL: f64 = 1e-10;

/// Maximum entrywise `|H - H^†|` accepted as Hermitian.
pub const TOL_HERM: f64 = 1e-9;

/// Most negative eigenvalue accepted as positive semidefinite.
pub const TOL_PSD: f64 = 1e-9;

/// Idempotence / self-adjointness slack for projectors.
pub const TOL_PROJ: f64 = 1e-9;

/// Slack for normalized-trace checks.
pub const TOL_TRACE: f64 = 1e-9;

/// Constraint-membership tolerance (absorbs solver error).
pub const TOL_MEMBER: f64 = 1e-8;

/// Smallest probability a conditioning event may have before division.
pub const TOL_PROB: f64 = 1e-12;
