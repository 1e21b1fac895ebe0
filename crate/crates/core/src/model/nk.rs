//! New-Keynesian model with a fiscal block, log-linearized.
//!
//! Four equations: an Euler equation with a demand disturbance, the Phillips
//! curve, the government budget constraint in real debt, and the generalized
//! rate rule. The builder substitutes the rule and the inflation expectation
//! into the forward-looking rows and returns the canonical system over
//! `(y_t, pi_t | R_{t-1}, b_{t-1})`, growing to five variables when the rule
//! carries a lagged-inflation term (`delta * phi_pi != 0`).
//!
//! [`nk_lead_form`] exposes the equivalent one-period-lead representation of
//! the strict-PLT system — the lead matrix, its inverse applied to the
//! right-hand side, and the 3x3 non-debt block with its determinant, trace,
//! and principal-minor summaries — which is the form the determinacy case
//! analysis works with. Both representations share their nonzero spectrum.

use nalgebra::DMatrix;

use super::params::ModelParams;
use super::rule::{RuleCoeffs, RuleKind};
use super::{LinearReModel, ShockProcess};
use crate::error::{Error, Result};

/// A built New-Keynesian model: parameters, rule, and canonical system.
#[derive(Debug, Clone)]
pub struct NkModel {
    pub params: ModelParams,
    pub rule: RuleCoeffs,
    pub rule_kind: RuleKind,
    pub system: LinearReModel,
}

impl NkModel {
    /// Debt-equation autoregressive root `(1/beta)(1 - (tau/b) gamma)`.
    pub fn debt_root(&self) -> f64 {
        debt_root(&self.params)
    }
}

pub(crate) fn debt_root(params: &ModelParams) -> f64 {
    (1.0 - params.tau_over_b() * params.gamma) / params.beta
}

/// Builds the canonical system for an arbitrary rule.
pub fn build_nk(params: &ModelParams, rule: &RuleCoeffs) -> Result<NkModel> {
    params.validate_nk()?;
    if rule.c_theta != 1.0 {
        return Err(Error::UnsupportedRule(format!(
            "rule must carry the monetary shock with unit loading, got c_theta={}",
            rule.c_theta
        )));
    }
    if (rule.c_theta_lag + rule.c_r_lag).abs() > 1e-12 {
        return Err(Error::UnsupportedRule(
            "quasi-differenced rule requires c_theta_lag = -c_r_lag".into(),
        ));
    }

    let beta = params.beta;
    let kappa = params.kappa;
    let delta = rule.c_r_lag;
    let rc = rule.c_pi;
    let cpl = rule.c_pi_lag;
    let a_b = debt_root(params);
    let fiscal_load = -params.tau_over_b() / beta;
    let carries_pi_lag = cpl != 0.0;
    let n = if carries_pi_lag { 5 } else { 4 };

    let mut a = DMatrix::zeros(n, n);
    let mut b = DMatrix::zeros(n, 3);

    // E y_{t+1}: Euler with the rule and E pi_{t+1} substituted in.
    a[(0, 0)] = 1.0 + kappa / beta;
    a[(0, 1)] = rc - 1.0 / beta;
    a[(0, 2)] = delta;
    b[(0, 0)] = -(1.0 - params.rho_eps);
    b[(0, 1)] = 1.0;
    // E pi_{t+1}: Phillips curve.
    a[(1, 0)] = -kappa / beta;
    a[(1, 1)] = 1.0 / beta;
    // R_t: the rule, realized.
    a[(2, 1)] = rc;
    a[(2, 2)] = delta;
    b[(2, 1)] = 1.0;
    // b_t: budget constraint with R_t substituted, realized.
    a[(3, 1)] = rc - 1.0 / beta;
    a[(3, 2)] = delta;
    a[(3, 3)] = a_b;
    b[(3, 1)] = 1.0;
    b[(3, 2)] = fiscal_load;
    if carries_pi_lag {
        for row in [0, 2, 3] {
            a[(row, 4)] = cpl;
        }
        // Carry current inflation forward as a state.
        a[(4, 1)] = 1.0;
    }

    let mut var_names = vec![
        "y".to_string(),
        "pi".to_string(),
        "R_lag".to_string(),
        "b_lag".to_string(),
    ];
    if carries_pi_lag {
        var_names.push("pi_lag".to_string());
    }
    let system = LinearReModel {
        a,
        b,
        var_names,
        shock_names: vec!["demand".into(), "monetary".into(), "fiscal".into()],
        n_predetermined: n - 2,
        shocks: vec![
            ShockProcess::level("demand", params.rho_eps),
            ShockProcess::quasi_diff("monetary", params.rho_theta, delta),
            ShockProcess::level("fiscal", params.rho_psi),
        ],
    };
    system.validate()?;

    let rule_kind = if delta == 0.0 && cpl == 0.0 {
        RuleKind::It
    } else if delta == 1.0 && cpl == 0.0 {
        RuleKind::Plt
    } else {
        RuleKind::General
    };
    Ok(NkModel {
        params: params.clone(),
        rule: *rule,
        rule_kind,
        system,
    })
}

/// One-period-lead representation of the strict-PLT system.
#[derive(Debug, Clone)]
pub struct NkLeadForm {
    /// Lead matrix multiplying `X_{t+1}` in the structural stacking.
    pub lead: DMatrix<f64>,
    /// Right-hand-side matrix multiplying `X_t`.
    pub rhs: DMatrix<f64>,
    /// Closed-form `lead^{-1} * rhs` over `(y, pi, R, b)`.
    pub a: DMatrix<f64>,
    /// The same product computed by numerical inversion.
    pub a_inverted: DMatrix<f64>,
    /// Non-debt 3x3 block of `a`.
    pub a_tilde: DMatrix<f64>,
    /// Closed-form inverse of `a_tilde`.
    pub a_tilde_inv: DMatrix<f64>,
}

impl NkLeadForm {
    /// Closed-form (det, trace, principal-minor sum) of `a_tilde`:
    /// `(1/beta, 2 + 1/beta + kappa/beta, (1/beta)(2 + kappa + beta + kappa*phi_p))`.
    pub fn a_tilde_summaries(params: &ModelParams) -> (f64, f64, f64) {
        let (b, k, fp) = (params.beta, params.kappa, params.phi_p);
        (1.0 / b, 2.0 + 1.0 / b + k / b, (2.0 + k + b + k * fp) / b)
    }

    /// Closed-form (det, trace, principal-minor sum) of `a_tilde_inv`:
    /// `(beta, kappa + beta + kappa*phi_p + 2, 2*beta + 1 + kappa)`.
    pub fn a_tilde_inv_summaries(params: &ModelParams) -> (f64, f64, f64) {
        let (b, k, fp) = (params.beta, params.kappa, params.phi_p);
        (b, k + b + k * fp + 2.0, 2.0 * b + 1.0 + k)
    }
}

/// Assembles the one-period-lead representation for the strict-PLT rule.
pub fn nk_lead_form(params: &ModelParams) -> Result<NkLeadForm> {
    params.validate_nk()?;
    let (beta, kappa, fp) = (params.beta, params.kappa, params.phi_p);
    let a_b = debt_root(params);

    let lead = DMatrix::from_row_slice(
        4,
        4,
        &[
            -1.0,
            -1.0,
            0.0,
            0.0, //
            0.0,
            -beta,
            0.0,
            0.0, //
            0.0,
            -fp,
            1.0,
            0.0, //
            0.0,
            1.0 / beta,
            -1.0,
            1.0,
        ],
    );
    let rhs = DMatrix::from_row_slice(
        4,
        4,
        &[
            -1.0, 0.0, -1.0, 0.0, //
            kappa, -1.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, a_b,
        ],
    );
    let a = DMatrix::from_row_slice(
        4,
        4,
        &[
            kappa / beta + 1.0,
            -1.0 / beta,
            1.0,
            0.0,
            -kappa / beta,
            1.0 / beta,
            0.0,
            0.0,
            -(kappa / beta) * fp,
            fp / beta,
            1.0,
            0.0,
            -(kappa / (beta * beta)) * (beta * fp - 1.0),
            (beta * fp - 1.0) / (beta * beta),
            1.0,
            a_b,
        ],
    );
    let a_inverted = lead
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::EigenFailure("lead matrix is singular".into()))?;
    let a_tilde = a.view((0, 0), (3, 3)).into_owned();
    let a_tilde_inv = DMatrix::from_row_slice(
        3,
        3,
        &[
            1.0,
            1.0 + fp,
            -1.0,
            kappa,
            kappa + beta + kappa * fp,
            -kappa,
            0.0,
            -fp,
            1.0,
        ],
    );
    Ok(NkLeadForm {
        lead,
        rhs,
        a,
        a_inverted,
        a_tilde,
        a_tilde_inv,
    })
}

/// det, trace, and sum of principal 2x2 minors of a 3x3 matrix.
pub fn summaries_3x3(m: &DMatrix<f64>) -> (f64, f64, f64) {
    assert_eq!((m.nrows(), m.ncols()), (3, 3));
    let minor = |i: usize, j: usize| m[(i, i)] * m[(j, j)] - m[(i, j)] * m[(j, i)];
    (
        m.determinant(),
        m.trace(),
        minor(0, 1) + minor(0, 2) + minor(1, 2),
    )
}
