//! Model parameters, the generalized policy rule, and builders that put both
//! models into the canonical first-order form
//!
//! ```text
//! E_t X_{t+1} = A X_t + B e_t
//! ```
//!
//! where `X_t` stacks jump variables dated `t` first and predetermined
//! variables dated `t-1` last, and `e_t` collects the exogenous drivers as
//! they enter the equations (an AR(1) level or a quasi-difference
//! `theta_t - delta * theta_{t-1}` of one). Rows for jump variables hold in
//! expectation; rows for predetermined variables hold exactly, which is what
//! lets the solver advance the state along a realized path.

mod leeper;
mod nk;
mod params;
mod rule;

pub use leeper::{build_leeper, LeeperModel};
pub use nk::{build_nk, nk_lead_form, summaries_3x3, NkLeadForm, NkModel};
pub use params::{ModelParams, Weights};
pub use rule::{make_rule, RuleCoeffs, RuleKind, RuleScaling};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How one exogenous driver enters the system and evolves.
///
/// The underlying level follows `lev_t = rho * lev_{t-1} + eta_t`; the value
/// entering `B` is `lev_t - quasi_diff * lev_{t-1}`. `quasi_diff = 0` is the
/// plain AR(1) level, `quasi_diff = 1` its first difference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockProcess {
    pub name: String,
    pub rho: f64,
    pub quasi_diff: f64,
}

impl ShockProcess {
    pub fn level(name: &str, rho: f64) -> Self {
        ShockProcess {
            name: name.into(),
            rho,
            quasi_diff: 0.0,
        }
    }

    pub fn quasi_diff(name: &str, rho: f64, delta: f64) -> Self {
        ShockProcess {
            name: name.into(),
            rho,
            quasi_diff: delta,
        }
    }
}

/// A linear rational-expectations model in canonical first-order form.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearReModel {
    /// Transition matrix over the stacked vector `X_t`.
    pub a: DMatrix<f64>,
    /// Loading of the exogenous drivers `e_t`.
    pub b: DMatrix<f64>,
    /// Labels of the entries of `X_t`; predetermined entries carry a
    /// `_lag` suffix since they are dated `t-1`.
    pub var_names: Vec<String>,
    /// Labels of the exogenous drivers (columns of `b`).
    pub shock_names: Vec<String>,
    /// Count of predetermined entries; they are listed last in `X_t`.
    pub n_predetermined: usize,
    /// Law of motion of each exogenous driver, aligned with `shock_names`.
    pub shocks: Vec<ShockProcess>,
}

impl LinearReModel {
    /// Validates the shape invariants: square `a`, matching `b` rows,
    /// consistent label counts, unique labels.
    pub fn validate(&self) -> Result<()> {
        let n = self.a.nrows();
        if self.a.ncols() != n {
            return Err(Error::InvalidParams(
                "transition matrix must be square".into(),
            ));
        }
        if self.b.nrows() != n {
            return Err(Error::InvalidParams(format!(
                "shock loading has {} rows for a {n}-variable system",
                self.b.nrows()
            )));
        }
        if self.var_names.len() != n {
            return Err(Error::InvalidParams(
                "one label per variable required".into(),
            ));
        }
        if self.shock_names.len() != self.b.ncols() || self.shocks.len() != self.b.ncols() {
            return Err(Error::InvalidParams(
                "one label and process per shock column required".into(),
            ));
        }
        if self.n_predetermined > n {
            return Err(Error::InvalidParams(
                "n_predetermined exceeds system dimension".into(),
            ));
        }
        let mut names: Vec<&str> = self
            .var_names
            .iter()
            .chain(self.shock_names.iter())
            .map(|s| s.as_str())
            .collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams("labels must be unique".into()));
        }
        Ok(())
    }

    /// Number of jump (non-predetermined) variables, listed first in `X_t`.
    pub fn n_jumps(&self) -> usize {
        self.a.nrows() - self.n_predetermined
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn jump_names(&self) -> &[String] {
        &self.var_names[..self.n_jumps()]
    }

    /// Labels of the predetermined entries, without the `_lag` dating suffix,
    /// i.e. the names of the states as of the current period.
    pub fn state_names(&self) -> Vec<String> {
        self.var_names[self.n_jumps()..]
            .iter()
            .map(|s| s.strip_suffix("_lag").unwrap_or(s).to_string())
            .collect()
    }

    pub fn shock_index(&self, name: &str) -> Option<usize> {
        self.shock_names.iter().position(|s| s == name)
    }
}
