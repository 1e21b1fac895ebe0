//! Numerical tolerances used across the crate, each with its rationale.

/// An eigenvalue counts as unstable iff its modulus exceeds `1 + UNIT_CIRCLE`.
/// Knife-edge roots inside the band are reported as boundary cases rather
/// than silently classified.
pub const UNIT_CIRCLE: f64 = 1e-8;

/// Steady-state identities of the flexible-price model must hold to this
/// residual; they are exact algebra, so only rounding is tolerated.
pub const STEADY_STATE: f64 = 1e-12;

/// Maximum imaginary part allowed when casting a complex-assembled solution
/// back to real matrices.
pub const REALNESS: f64 = 1e-10;

/// Condition-number ceiling for the jump-restriction system; above this the
/// eigenvector matrix is treated as near-defective.
pub const COND_LIMIT: f64 = 1e10;

/// Half-width of the parameter band around analytic regime boundaries inside
/// which predicates report `Boundary` instead of a verdict.
pub const BOUNDARY_BAND: f64 = 1e-6;

/// Complementarity residual allowed on a converged ZLB path.
pub const ZLB_COMPLEMENTARITY: f64 = 1e-8;
