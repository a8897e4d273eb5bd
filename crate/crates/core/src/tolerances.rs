//! Every numerical threshold the crate uses, in one place.

/// Minimum slack on every active domain constraint for a point to count as
/// interior. Gradients are never evaluated closer to the boundary than this.
pub const DOMAIN_MARGIN: f64 = 1e-12;

/// Singular values at or below `RANK_TOL * sigma_max` count as zero.
pub const RANK_TOL: f64 = 1e-10;

/// A least-squares solution whose residual exceeds
/// `EMPTY_RESIDUAL_REL * (1 + |rhs|)` marks the linear system inconsistent.
pub const EMPTY_RESIDUAL_REL: f64 = 1e-8;

/// Residual bound for linear solutions: `LIN_TOL * (1 + |rhs|)`.
pub const LIN_TOL: f64 = 1e-10;

/// Newton stopping threshold on the reduced residual norm, scaled by
/// `1 + |rhs|` of the system being solved.
pub const NEWTON_TOL: f64 = 1e-11;

pub const NEWTON_MAX_ITER: usize = 100;

/// Step halvings allowed per Newton iteration, and when pulling a start
/// point back into the domain.
pub const MAX_HALVINGS: usize = 60;

/// Equidistance tolerance: `CC_TOL * (1 + max_i D_f)`.
pub const CC_TOL: f64 = 1e-8;

/// Absolute per-coordinate tolerance for duality comparisons.
pub const DUAL_TOL: f64 = 1e-7;

/// Random restarts for the forward circumcenter Newton solve.
pub const FORWARD_RESTARTS: usize = 8;
