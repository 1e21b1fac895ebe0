//! The generalized interest-rate rule and its quasi-differenced coefficients.
//!
//! The rule targets a price-level path that is itself updated toward the
//! realized price level at rate `1 - delta`. Quasi-differencing removes the
//! price level and leaves a rule in inflation, the lagged rate, and the
//! monetary shock:
//!
//! ```text
//! R_t = c_pi pi_t + c_pi_lag pi_{t-1} + c_R_lag R_{t-1}
//!       + c_theta theta_t + c_theta_lag theta_{t-1}
//! ```
//!
//! `delta = 0, phi_p = 0` is plain inflation targeting; `delta = 1,
//! phi_pi = 0` is the strict price-level-targeting (superinertial) rule.

use serde::{Deserialize, Serialize};

/// Which variables the rule responds to, in deviation form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    /// Inflation targeting: `delta = 0`, `phi_p = 0`.
    It,
    /// Strict price-level targeting: `delta = 1`, `phi_pi = 0`.
    Plt,
    /// Any `(phi_p, phi_pi, delta)` combination.
    General,
}

impl RuleKind {
    pub fn label(self) -> &'static str {
        match self {
            RuleKind::It => "IT",
            RuleKind::Plt => "PLT",
            RuleKind::General => "general",
        }
    }
}

/// Deviation units of the rule.
///
/// The flexible-price model is linearized in levels, which scales the
/// inflation responses by `1 / pi_ss`; the New-Keynesian model is
/// log-linear and carries no such scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleScaling {
    Level,
    Log,
}

/// Quasi-differenced rule coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleCoeffs {
    /// Coefficient on current inflation: `(phi_p + phi_pi) / pi` (level) or
    /// `phi_p + phi_pi` (log).
    pub c_pi: f64,
    /// Coefficient on lagged inflation: `-delta * phi_pi`, scaled likewise.
    pub c_pi_lag: f64,
    /// Coefficient on the lagged rate: `delta`.
    pub c_r_lag: f64,
    /// Coefficient on the current monetary shock: always 1.
    pub c_theta: f64,
    /// Coefficient on the lagged monetary shock: `-delta`.
    pub c_theta_lag: f64,
}

impl RuleCoeffs {
    /// Inertia parameter recovered from the lag structure.
    pub fn delta(&self) -> f64 {
        self.c_r_lag
    }
}

/// Builds the quasi-differenced rule coefficients for `(phi_p, phi_pi, delta)`.
pub fn make_rule(
    phi_p: f64,
    phi_pi: f64,
    delta: f64,
    scaling: RuleScaling,
    pi_ss: f64,
) -> RuleCoeffs {
    let s = match scaling {
        RuleScaling::Level => 1.0 / pi_ss,
        RuleScaling::Log => 1.0,
    };
    RuleCoeffs {
        c_pi: (phi_p + phi_pi) * s,
        c_pi_lag: -delta * phi_pi * s,
        c_r_lag: delta,
        c_theta: 1.0,
        c_theta_lag: -delta,
    }
}
