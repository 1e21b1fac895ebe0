//! Monetary-fiscal policy interactions under inflation targeting (IT) and
//! price level targeting (PLT).
//!
//! The crate builds two linearized rational-expectations models — a
//! flexible-price endowment model with money and bonds, and a small
//! New-Keynesian model with a fiscal block — under a generalized interest
//! rate rule that nests IT and PLT, and provides:
//!
//! - [`model`]: parameters, rule construction, and model builders that
//!   produce the canonical first-order form `E_t X_{t+1} = A X_t + B e_t`;
//! - [`solver`]: a Blanchard-Kahn eigen-decoupling solver that classifies
//!   any such system and returns the policy/transition matrices when the
//!   equilibrium is determinate;
//! - [`closed_form`]: the analytic inflation solutions of the flexible-price
//!   model, used as an independent oracle against the numerical solver;
//! - [`determinacy`]: analytic determinacy predicates and 2-D regime maps
//!   cross-validated against the numerical classifier;
//! - [`simulate`]: shock processes, impulse responses, a piecewise-linear
//!   zero-lower-bound solver, and welfare-loss evaluation;
//! - [`export`]: plot-ready CSV and JSON output with deterministic
//!   12-significant-digit formatting.

pub mod closed_form;
pub mod determinacy;
pub mod error;
pub mod export;
pub mod model;
pub mod simulate;
pub mod solver;
pub mod tol;

pub use error::Error;
pub use model::{
    build_leeper, build_nk, make_rule, LeeperModel, LinearReModel, ModelParams, NkModel,
    RuleCoeffs, RuleKind, RuleScaling, ShockProcess,
};
pub use solver::{classify, solve, Classification, Solution, Verdict};
