//! Analytic inflation solutions of the flexible-price model.
//!
//! The coefficient block and the four regime/rule solution rows are
//! transcribed directly from their printed closed forms and kept independent
//! of the numerical solver, which makes this module the oracle in the
//! solver-equivalence tests: any transcription-versus-derivation discrepancy
//! above tolerance surfaces as a named coefficient difference there.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::tol;

/// Coefficient block of the analytic solutions.
///
/// `phi*` are the substituted budget-constraint coefficients under the PLT
/// rule, `phi*_t` their IT counterparts; `h`, `k`, `j` (and `h_t`, `k_t`)
/// combine them in the solution rows; `e2` and `e3` are the non-zero
/// eigenvalues `1 + beta*phi_p/pi` and `1/beta - gamma`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LeeperCoeffs {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub phi1_t: f64,
    pub phi2_t: f64,
    pub phi3_t: f64,
    pub h: f64,
    pub k: f64,
    pub j: f64,
    pub h_t: f64,
    pub k_t: f64,
    pub e2: f64,
    pub e3: f64,
}

/// Evaluates the printed coefficient block at `params`.
pub fn leeper_coeffs(params: &ModelParams) -> Result<LeeperCoeffs> {
    params.validate_leeper()?;
    let (beta, pi, r, c, b, g) = (
        params.beta,
        params.pi_ss,
        params.r_ss,
        params.c_ss,
        params.b_ss,
        params.gamma,
    );
    let (fp, fpi) = (params.phi_p, params.phi_pi);
    if (r - 1.0).abs() < 1e-10 {
        return Err(Error::InvalidParams(
            "money demand is singular at r_ss = 1".into(),
        ));
    }
    let rm1 = r - 1.0;

    let phi1 = (c / rm1) * (1.0 / pi) * (1.0 / beta - fp / rm1) + b / (beta * pi);
    let phi2 = (1.0 / pi) * c / (rm1 * rm1) - c / (rm1 * rm1) - b / pi;
    let phi3 = -c / (rm1 * rm1);
    let phi1_t = (c / rm1) * (1.0 / pi) * (1.0 / beta - fpi / rm1) + b / (beta * pi);
    let phi2_t = (1.0 / pi) * c / (rm1 * rm1) - b / pi;
    let phi3_t = phi3;

    let h = 1.0 - 1.0 / beta + g + beta * fp / pi;
    let k = (1.0 / beta - g - 1.0) * phi1 + (fp / pi) * phi2;
    let j = beta * phi1 + (1.0 / beta - g - beta * fp / pi) * phi2;
    let h_t = -1.0 / beta + g + beta * fpi / pi;
    let k_t = (1.0 / beta - g) * phi1_t + (fpi / pi) * phi2_t;

    Ok(LeeperCoeffs {
        phi1,
        phi2,
        phi3,
        phi1_t,
        phi2_t,
        phi3_t,
        h,
        k,
        j,
        h_t,
        k_t,
        e2: 1.0 + beta * fp / pi,
        e3: 1.0 / beta - g,
    })
}

fn require(cond: bool, op: &'static str, detail: String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::WrongRegime { op, detail })
    }
}

fn regime_margin(e: f64, inside: bool) -> bool {
    if inside {
        e.abs() < 1.0 - tol::BOUNDARY_BAND
    } else {
        e.abs() > 1.0 + tol::BOUNDARY_BAND
    }
}

/// Inflation under active monetary / passive fiscal policy with the PLT rule:
///
/// ```text
/// pi_t = -(pi/phi_p) R_{t-1} - beta/(1 + beta*phi_p/pi - rho_theta) theta_t
///        + (pi/phi_p) theta_{t-1}
/// ```
pub fn pi_ampf_plt(r_lag: f64, theta: f64, theta_lag: f64, params: &ModelParams) -> Result<f64> {
    let cf = leeper_coeffs(params)?;
    require(
        params.phi_p > 0.0 && regime_margin(cf.e3, true),
        "pi_ampf_plt",
        format!(
            "requires phi_p > 0 and |1/beta - gamma| < 1, got phi_p={}, e3={}",
            params.phi_p, cf.e3
        ),
    )?;
    let pi = params.pi_ss;
    Ok(
        -(pi / params.phi_p) * r_lag - params.beta / (cf.e2 - params.rho_theta) * theta
            + (pi / params.phi_p) * theta_lag,
    )
}

/// Inflation under passive monetary / active fiscal policy with the PLT rule:
///
/// ```text
/// pi_t = -(J/K) R_{t-1} - e3 (H/K) b_{t-1} + e3 (H/K)/(e3 - rho_psi) psi_t
///        + [(e3 (H/K) phi3 - J/K - beta)/e3]
///          * [(e3 - 1)/(e3 - rho_theta) theta_t - theta_{t-1}]
/// ```
pub fn pi_pmaf_plt(
    r_lag: f64,
    b_lag: f64,
    psi: f64,
    theta: f64,
    theta_lag: f64,
    params: &ModelParams,
) -> Result<f64> {
    let cf = leeper_coeffs(params)?;
    require(
        params.phi_p < 0.0 && regime_margin(cf.e3, false),
        "pi_pmaf_plt",
        format!(
            "requires phi_p < 0 and |1/beta - gamma| > 1, got phi_p={}, e3={}",
            params.phi_p, cf.e3
        ),
    )?;
    let hk = cf.h / cf.k;
    let bracket = (cf.e3 * hk * cf.phi3 - cf.j / cf.k - params.beta) / cf.e3;
    Ok(-(cf.j / cf.k) * r_lag - cf.e3 * hk * b_lag
        + cf.e3 * hk / (cf.e3 - params.rho_psi) * psi
        + bracket * ((cf.e3 - 1.0) / (cf.e3 - params.rho_theta) * theta - theta_lag))
}

/// Inflation under active monetary / passive fiscal policy with the IT rule:
/// `pi_t = beta/(rho_theta - beta*phi_pi/pi) theta_t`.
pub fn pi_ampf_it(theta: f64, params: &ModelParams) -> Result<f64> {
    let cf = leeper_coeffs(params)?;
    let policy_root = params.beta * params.phi_pi / params.pi_ss;
    require(
        policy_root.abs() > 1.0 + tol::BOUNDARY_BAND && regime_margin(cf.e3, true),
        "pi_ampf_it",
        format!(
            "requires |beta*phi_pi/pi| > 1 and |1/beta - gamma| < 1, got root={policy_root}, e3={}",
            cf.e3
        ),
    )?;
    Ok(params.beta / (params.rho_theta - policy_root) * theta)
}

/// Inflation under passive monetary / active fiscal policy with the IT rule:
///
/// ```text
/// pi_t = phi2_t (H~/K~) R_{t-1} - e3 (H~/K~) b_{t-1}
///        + e3 (H~/K~)/(e3 - rho_psi) psi_t
///        + [(e3 (H~/K~) phi3_t + phi2_t (H~/K~) - beta)/(e3 - rho_theta)] theta_t
/// ```
pub fn pi_pmaf_it(
    r_lag: f64,
    b_lag: f64,
    psi: f64,
    theta: f64,
    params: &ModelParams,
) -> Result<f64> {
    let cf = leeper_coeffs(params)?;
    let policy_root = params.beta * params.phi_pi / params.pi_ss;
    require(
        policy_root.abs() < 1.0 - tol::BOUNDARY_BAND && regime_margin(cf.e3, false),
        "pi_pmaf_it",
        format!(
            "requires |beta*phi_pi/pi| < 1 and |1/beta - gamma| > 1, got root={policy_root}, e3={}",
            cf.e3
        ),
    )?;
    let hk = cf.h_t / cf.k_t;
    Ok(cf.phi2_t * hk * r_lag - cf.e3 * hk * b_lag
        + cf.e3 * hk / (cf.e3 - params.rho_psi) * psi
        + (cf.e3 * hk * cf.phi3_t + cf.phi2_t * hk - params.beta) / (cf.e3 - params.rho_theta)
            * theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use approx::assert_relative_eq;

    /// beta=0.99, pi=1, c=1, b=0.4, gamma=0, phi_p=-0.1, consistent R and m.
    fn example_params() -> ModelParams {
        ModelParams {
            b_ss: 0.4,
            phi_p: -0.1,
            phi_pi: 0.0,
            delta: 1.0,
            gamma: 0.0,
            ..ModelParams::default()
        }
        .with_consistent_steady_state()
    }

    #[test]
    fn phi3_identical_under_both_rules() {
        let cf = leeper_coeffs(&example_params()).unwrap();
        assert_eq!(cf.phi3, cf.phi3_t);
    }

    #[test]
    fn zero_phi_p_drops_its_terms() {
        let p = ModelParams {
            phi_p: 0.0,
            delta: 1.0,
            gamma: 0.3,
            ..ModelParams::default()
        };
        let cf = leeper_coeffs(&p).unwrap();
        assert_abs_diff_eq!(cf.h, 1.0 - 1.0 / 0.99 + 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(cf.e2, 1.0, epsilon = 0.0);
    }

    #[test]
    fn coefficient_block_values_at_example_params() {
        // Independently evaluated from the printed formulas at beta=0.99,
        // pi=1, R=1/0.99, c=1, b=0.4, gamma=0, phi_p=-0.1.
        let cf = leeper_coeffs(&example_params()).unwrap();
        assert_relative_eq!(cf.phi1, 1080.5040404040404, max_relative = 1e-10);
        assert_relative_eq!(cf.phi2, -0.4, max_relative = 1e-10);
        assert_relative_eq!(cf.phi3, -9801.0, max_relative = 1e-10);
        assert_relative_eq!(cf.h, -0.10910101010101017, max_relative = 1e-10);
        assert_relative_eq!(cf.k, 10.954182226303374, max_relative = 1e-9);
        assert_relative_eq!(cf.j, 1069.2553595959596, max_relative = 1e-9);
        assert_relative_eq!(cf.e2, 0.901, max_relative = 1e-12);
        assert_relative_eq!(cf.e3, 1.0101010101010102, max_relative = 1e-12);
    }

    #[test]
    fn ampf_plt_zero_inputs_give_zero() {
        let p = ModelParams {
            phi_p: 1.2,
            delta: 1.0,
            gamma: 0.2,
            ..ModelParams::default()
        };
        assert_eq!(pi_ampf_plt(0.0, 0.0, 0.0, &p).unwrap(), 0.0);
    }

    #[test]
    fn ampf_plt_monetary_shock_value() {
        // theta = 0.01 at beta=0.99, phi_p=1.2, pi=1, rho_theta=0.5:
        // -0.99*0.01 / (1 + 0.99*1.2 - 0.5).
        let p = ModelParams {
            phi_p: 1.2,
            delta: 1.0,
            gamma: 0.2,
            ..ModelParams::default()
        };
        let got = pi_ampf_plt(0.0, 0.01, 0.0, &p).unwrap();
        assert_relative_eq!(got, -0.005864928909952608, max_relative = 1e-12);
    }

    #[test]
    fn ampf_plt_rate_coefficient_negative_for_positive_phi_p() {
        for &phi_p in &[0.2, 0.7, 1.2, 2.5] {
            let p = ModelParams {
                phi_p,
                delta: 1.0,
                gamma: 0.2,
                ..ModelParams::default()
            };
            let coef = pi_ampf_plt(1.0, 0.0, 0.0, &p).unwrap();
            assert!(coef < 0.0, "coefficient on R_lag must be negative");
        }
    }

    #[test]
    fn pmaf_plt_zero_inputs_give_zero() {
        let p = example_params();
        assert_eq!(pi_pmaf_plt(0.0, 0.0, 0.0, 0.0, 0.0, &p).unwrap(), 0.0);
    }

    #[test]
    fn pmaf_plt_debt_coefficient_positive_at_default_mix() {
        // Inflation depends positively on lagged debt in the fiscally-led
        // regime at the phi_p=-0.1, gamma=0 parameterization.
        let p = example_params();
        let coef = pi_pmaf_plt(0.0, 1.0, 0.0, 0.0, 0.0, &p).unwrap();
        assert!(
            coef > 0.0,
            "coefficient on b_lag should be positive, got {coef}"
        );
        assert_relative_eq!(
            coef,
            -1.0101010101010102 * (-0.10910101010101017) / 10.954182226303374,
            max_relative = 1e-9
        );
    }

    #[test]
    fn ampf_it_depends_on_monetary_shock_only() {
        let p = ModelParams {
            phi_pi: 1.2,
            delta: 0.0,
            gamma: 0.2,
            ..ModelParams::default()
        };
        assert_eq!(pi_ampf_it(0.0, &p).unwrap(), 0.0);
        let got = pi_ampf_it(0.01, &p).unwrap();
        // beta/(rho - beta*phi_pi) * theta at pi = 1.
        assert_relative_eq!(got, 0.99 / (0.5 - 0.99 * 1.2) * 0.01, max_relative = 1e-12);
    }

    #[test]
    fn regime_guards_reject_opposite_parameterization() {
        // The fiscally-led parameterization is rejected by the AM/PF forms
        // and vice versa.
        let pmaf = example_params();
        assert!(matches!(
            pi_ampf_plt(0.0, 0.01, 0.0, &pmaf),
            Err(Error::WrongRegime {
                op: "pi_ampf_plt",
                ..
            })
        ));
        let ampf = ModelParams {
            phi_p: 1.2,
            delta: 1.0,
            gamma: 0.2,
            ..ModelParams::default()
        };
        assert!(matches!(
            pi_pmaf_plt(0.0, 0.0, 0.0, 0.01, 0.0, &ampf),
            Err(Error::WrongRegime {
                op: "pi_pmaf_plt",
                ..
            })
        ));
        let it_pmaf = ModelParams {
            phi_pi: 0.9,
            delta: 0.0,
            gamma: 0.0,
            ..ModelParams::default()
        };
        assert!(pi_ampf_it(0.01, &it_pmaf).is_err());
        assert!(pi_pmaf_it(0.0, 0.0, 0.0, 0.01, &it_pmaf).is_ok());
    }

    #[test]
    fn singular_money_demand_rejected() {
        let mut p = example_params();
        p.r_ss = 1.0;
        p.pi_ss = p.r_ss * p.beta;
        assert!(leeper_coeffs(&p).is_err());
    }
}
