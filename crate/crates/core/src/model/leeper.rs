//! Flexible-price model with money, bonds, lump-sum taxes, and the
//! generalized rate rule, linearized in level deviations.
//!
//! The structural block is a Fisher equation, a money demand relation, the
//! government budget constraint, and a tax rule on lagged debt. Money and
//! taxes are eliminated by substitution, leaving a three-variable system in
//! `(pi_t, R_{t-1}, b_{t-1})` driven by the monetary and fiscal shocks. Only
//! the two polar rules are supported here: strict PLT (`delta = 1`,
//! `phi_pi = 0`) and strict IT (`delta = 0`, `phi_p = 0`); mixed rules are
//! the province of the New-Keynesian builder.

use nalgebra::DMatrix;

use super::params::ModelParams;
use super::rule::{make_rule, RuleCoeffs, RuleKind, RuleScaling};
use super::{LinearReModel, ShockProcess};
use crate::error::{Error, Result};

/// A built flexible-price model: parameters, rule, and canonical system.
#[derive(Debug, Clone)]
pub struct LeeperModel {
    pub params: ModelParams,
    pub rule_kind: RuleKind,
    pub rule: RuleCoeffs,
    pub system: LinearReModel,
}

impl LeeperModel {
    /// Eigenvalues of the transition matrix in closed form.
    ///
    /// Strict PLT: `{0, 1 + beta*phi_p/pi, 1/beta - gamma}`.
    /// Strict IT: `{0, beta*phi_pi/pi, 1/beta - gamma}`.
    pub fn analytic_eigenvalues(&self) -> [f64; 3] {
        let p = &self.params;
        let policy_root = match self.rule_kind {
            RuleKind::Plt => 1.0 + p.beta * p.phi_p / p.pi_ss,
            RuleKind::It => p.beta * p.phi_pi / p.pi_ss,
            RuleKind::General => unreachable!("builder rejects mixed rules"),
        };
        [0.0, policy_root, 1.0 / p.beta - p.gamma]
    }
}

/// Builds the three-variable system for the strict-PLT or strict-IT rule.
///
/// The debt-equation coefficients come from substituting money demand, the
/// tax rule, and the rate rule into the budget constraint, using the
/// steady-state values carried in `params` directly; the printed analytic
/// coefficient block is kept separately in [`crate::closed_form`] so the two
/// derivations can be checked against each other.
pub fn build_leeper(params: &ModelParams) -> Result<LeeperModel> {
    params.validate_leeper()?;
    let rule_kind = infer_polar_rule(params)?;
    let rule = make_rule(
        params.phi_p,
        params.phi_pi,
        params.delta,
        RuleScaling::Level,
        params.pi_ss,
    );

    let pi = params.pi_ss;
    let beta = params.beta;
    let r = params.r_ss;
    let delta = params.delta;
    // Money-demand semi-elasticity magnitude: m_t deviates by -md * R_t.
    let md = params.c_ss / ((r - 1.0) * (r - 1.0));
    let e3 = 1.0 / beta - params.gamma;

    // Substituted budget constraint:
    //   coef_pi * pi_t + b_t - e3 * b_{t-1} + coef_rlag * R_{t-1}
    //     - md * (theta_t - delta * theta_{t-1}) + psi_t = 0
    let coef_pi = (params.m_ss + params.b_ss * r) / (pi * pi) - md * rule.c_pi;
    let coef_rlag = md / pi - params.b_ss / pi - delta * md;

    // Rows: E pi_{t+1} (Fisher combined with the rule), R_t (rule, realized),
    // b_t (budget constraint, realized).
    let a = DMatrix::from_row_slice(
        3,
        3,
        &[
            beta * rule.c_pi,
            beta * rule.c_r_lag,
            0.0,
            rule.c_pi,
            rule.c_r_lag,
            0.0,
            -coef_pi,
            -coef_rlag,
            e3,
        ],
    );
    let b = DMatrix::from_row_slice(3, 2, &[beta, 0.0, 1.0, 0.0, md, -1.0]);

    let system = LinearReModel {
        a,
        b,
        var_names: vec!["pi".into(), "R_lag".into(), "b_lag".into()],
        shock_names: vec!["monetary".into(), "fiscal".into()],
        n_predetermined: 2,
        shocks: vec![
            ShockProcess::quasi_diff("monetary", params.rho_theta, delta),
            ShockProcess::level("fiscal", params.rho_psi),
        ],
    };
    system.validate()?;
    Ok(LeeperModel {
        params: params.clone(),
        rule_kind,
        rule,
        system,
    })
}

fn infer_polar_rule(params: &ModelParams) -> Result<RuleKind> {
    if params.delta == 1.0 && params.phi_pi == 0.0 {
        Ok(RuleKind::Plt)
    } else if params.delta == 0.0 && params.phi_p == 0.0 {
        Ok(RuleKind::It)
    } else {
        Err(Error::UnsupportedRule(format!(
            "flexible-price builder accepts strict PLT (delta=1, phi_pi=0) or strict IT \
             (delta=0, phi_p=0); got phi_p={}, phi_pi={}, delta={}",
            params.phi_p, params.phi_pi, params.delta
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn plt_params(phi_p: f64, gamma: f64) -> ModelParams {
        ModelParams {
            phi_p,
            phi_pi: 0.0,
            delta: 1.0,
            gamma,
            ..ModelParams::default()
        }
    }

    #[test]
    fn plt_eigenvalues_match_closed_form() {
        // beta=0.99, gamma=0, phi_p=-0.1, pi=1: {0, 1/0.99, 0.901}.
        let m = build_leeper(&plt_params(-0.1, 0.0)).unwrap();
        let mut eigs: Vec<f64> = m
            .system
            .a
            .clone()
            .complex_eigenvalues()
            .iter()
            .map(|z| z.re)
            .collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_abs_diff_eq!(eigs[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], 0.901, epsilon = 1e-10);
        assert_abs_diff_eq!(eigs[2], 1.0101010101010102, epsilon = 1e-10);
    }

    #[test]
    fn fiscal_shock_column_is_unit_on_debt_row() {
        let m = build_leeper(&plt_params(1.2, 0.2)).unwrap();
        let col = m.system.b.column(1);
        assert_eq!(col[0], 0.0);
        assert_eq!(col[1], 0.0);
        assert_eq!(col[2], -1.0);
    }

    #[test]
    fn mixed_rules_rejected() {
        let p = ModelParams {
            phi_p: 0.5,
            phi_pi: 0.5,
            delta: 0.5,
            ..ModelParams::default()
        };
        assert!(matches!(build_leeper(&p), Err(Error::UnsupportedRule(_))));
    }

    #[test]
    fn it_system_has_no_rate_feedback_in_rule_row() {
        let p = ModelParams {
            phi_pi: 1.5,
            delta: 0.0,
            phi_p: 0.0,
            ..ModelParams::default()
        };
        let m = build_leeper(&p).unwrap();
        assert_eq!(m.rule_kind, RuleKind::It);
        // Rule row: R_t = (phi_pi/pi) pi_t + theta_t.
        assert_abs_diff_eq!(m.system.a[(1, 0)], 1.5, epsilon = 1e-15);
        assert_eq!(m.system.a[(1, 1)], 0.0);
        assert_eq!(m.system.shocks[0].quasi_diff, 0.0);
    }
}
