//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates its domain (sign, range, or steady-state identity).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Steady-state consistency residual above tolerance.
    #[error("steady-state inconsistency: {identity} residual {residual:e} exceeds {tol:e}")]
    SteadyState {
        identity: &'static str,
        residual: f64,
        tol: f64,
    },

    /// A builder or formula was asked for a rule/regime combination it does not cover.
    #[error("unsupported rule or regime: {0}")]
    UnsupportedRule(String),

    /// A regime-specific closed form was evaluated outside its regime.
    #[error("wrong regime for {op}: {detail}")]
    WrongRegime { op: &'static str, detail: String },

    /// The eigen decomposition itself failed (distinct from any verdict).
    #[error("eigen decomposition failed: {0}")]
    EigenFailure(String),

    /// Eigenvector system too close to defective to decouple reliably.
    #[error("near-defective eigenvector system (condition estimate {cond:e})")]
    NearDefective { cond: f64 },

    /// A solution was requested for a model that is not determinate.
    #[error("model is not determinate: {verdict} ({n_unstable} unstable roots, {n_jumps} jump variables)")]
    NotDeterminate {
        verdict: &'static str,
        n_unstable: usize,
        n_jumps: usize,
    },

    /// A solution that should be real retained imaginary parts above tolerance.
    #[error("complex residue in real solution: max imaginary part {max_imag:e}")]
    ComplexResidue { max_imag: f64 },

    /// Invalid experiment request (horizon, shock, or weights).
    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    /// The guess-and-verify bound search did not reach a fixed point.
    #[error("ZLB window search did not converge within {max_iter} iterations")]
    ZlbNoConvergence { max_iter: usize },

    /// The binding window reached the terminal buffer of the simulation.
    #[error(
        "ZLB horizon too short: window binds at {last_binding} against terminal date {terminal}"
    )]
    ZlbHorizonTooShort {
        last_binding: usize,
        terminal: usize,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
