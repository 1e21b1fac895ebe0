//! Piecewise-linear zero-lower-bound experiment for the sticky-price model.
//!
//! Guess-and-verify over the set of dates where the bound binds: given a
//! candidate binding window, the path is solved backward from the terminal
//! unconstrained regime with the rate rule replaced by `R_t = bound` inside
//! the window, then simulated forward; dates where the rate pierces the
//! bound join the window, dates where the rule's prescribed rate climbs back
//! above it leave, and the loop stops at a fixed point. On the converged
//! path `min(R_t - bound, rule residual_t) = 0` holds date by date.

use nalgebra::{DMatrix, DVector};

use super::{assemble_columns, irf, IrfSeries, RawPath, ShockSpec, SolvedModel};
use crate::error::{Error, Result};
use crate::model::NkModel;
use crate::solver::Solution;

const MAX_WINDOW_ITER: usize = 100;
/// The window may not enter this many terminal dates, where the path is
/// pinned to the unconstrained regime.
const TERMINAL_BUFFER: usize = 20;
/// Slack on window membership updates, well below economic magnitudes.
const WINDOW_TOL: f64 = 1e-12;

/// Rate floor making the gross policy rate bottom out at one:
/// `-ln(pi_ss / beta)` in log deviations.
pub fn natural_zlb_bound(params: &crate::model::ModelParams) -> f64 {
    -(params.pi_ss / params.beta).ln()
}

/// Impulse response under a lower bound on the policy rate.
///
/// `bound` is in the same deviation units as `R`. An infinite or never
/// binding bound reproduces the unconstrained [`irf`] exactly.
pub fn zlb_irf(
    solved: &SolvedModel,
    shock: &ShockSpec,
    horizon: usize,
    bound: f64,
) -> Result<IrfSeries> {
    let (model, solution) = match solved {
        SolvedModel::Nk { model, solution } => (model, solution),
        SolvedModel::Leeper { .. } => {
            return Err(Error::InvalidExperiment(
                "the ZLB experiment needs the sticky-price model; the flexible-price \
                 rate is pinned by the Fisher equation"
                    .into(),
            ))
        }
    };
    if horizon == 0 {
        return Err(Error::InvalidExperiment(
            "horizon must be at least 1".into(),
        ));
    }
    if bound.is_nan() {
        return Err(Error::InvalidExperiment("bound must not be NaN".into()));
    }
    let shock_index = super::validate_shock(solved, shock)?;

    let terminal = (horizon + 2 * TERMINAL_BUFFER).max(120);
    let window = converge_window(model, solution, shock_index, shock.size, terminal, bound)?;

    if window.iter().all(|&w| !w) {
        // Empty window: the unconstrained linear solution satisfies the
        // complementarity conditions everywhere, so return it verbatim.
        let mut series = irf(solved, shock, horizon)?;
        series.zlb_window = Some(Vec::new());
        series.bound = Some(bound);
        return Ok(series);
    }

    if let Some(last) = window.iter().rposition(|&w| w) {
        if last + TERMINAL_BUFFER >= terminal {
            return Err(Error::ZlbHorizonTooShort {
                last_binding: last,
                terminal,
            });
        }
    }

    let path = piecewise_path(
        model,
        solution,
        shock_index,
        shock.size,
        terminal,
        bound,
        &window,
    )?;
    let raw = RawPath {
        jumps: path.u.iter().map(|u| u.rows(0, 2).into_owned()).collect(),
        states: path.states.clone(),
        exo: path.exo.clone(),
    };
    let columns = assemble_columns(solved, shock, &raw, horizon);
    Ok(IrfSeries {
        horizon,
        shock: *shock,
        regime: solved.regime_label(),
        rule: solved.rule_kind().label().to_string(),
        columns,
        zlb_window: Some(
            window
                .iter()
                .enumerate()
                .filter_map(|(t, &w)| w.then_some(t))
                .collect(),
        ),
        bound: Some(bound),
    })
}

struct PiecewisePath {
    /// Per-date `(y, pi, R, b)`.
    u: Vec<DVector<f64>>,
    /// Per-date endogenous states as carried by the model (R, b[, pi]).
    states: Vec<DVector<f64>>,
    /// Per-date exogenous state, `horizon + 1` entries.
    exo: Vec<DVector<f64>>,
}

fn converge_window(
    model: &NkModel,
    solution: &Solution,
    shock_index: usize,
    size: f64,
    terminal: usize,
    bound: f64,
) -> Result<Vec<bool>> {
    let mut window = vec![false; terminal];
    for _ in 0..MAX_WINDOW_ITER {
        let path = piecewise_path(model, solution, shock_index, size, terminal, bound, &window)?;
        let mut changed = false;
        let mut updated = window.clone();
        for (t, slot) in updated.iter_mut().enumerate() {
            if !*slot {
                if path.u[t][2] < bound - WINDOW_TOL {
                    *slot = true;
                    changed = true;
                }
            } else if prescribed_rate(model, &path, t) > bound + WINDOW_TOL {
                *slot = false;
                changed = true;
            }
        }
        window = updated;
        if !changed {
            return Ok(window);
        }
    }
    Err(Error::ZlbNoConvergence {
        max_iter: MAX_WINDOW_ITER,
    })
}

/// Rate the rule would set at date `t` given the realized path.
fn prescribed_rate(model: &NkModel, path: &PiecewisePath, t: usize) -> f64 {
    let rule = &model.rule;
    let pi_t = path.u[t][1];
    let pi_lag = if t > 0 { path.u[t - 1][1] } else { 0.0 };
    let r_lag = if t > 0 { path.u[t - 1][2] } else { 0.0 };
    let m = monetary_value(model, path, t);
    rule.c_pi * pi_t + rule.c_pi_lag * pi_lag + rule.c_r_lag * r_lag + m
}

/// Quasi-differenced monetary shock value at date `t`.
fn monetary_value(model: &NkModel, path: &PiecewisePath, t: usize) -> f64 {
    let j = 1; // monetary shock column
    let w = &path.exo[t];
    w[2 * j] - model.rule.c_r_lag * w[2 * j + 1]
}

/// Solves the whole path for a fixed binding window by backward recursion
/// from the terminal unconstrained regime, then a forward pass.
fn piecewise_path(
    model: &NkModel,
    solution: &Solution,
    shock_index: usize,
    size: f64,
    terminal: usize,
    bound: f64,
    window: &[bool],
) -> Result<PiecewisePath> {
    let p = &model.params;
    let rule = &model.rule;
    let n_states = model.system.n_predetermined;
    let n_shocks = solution.shock_names.len();
    let n_w = solution.exo_p.nrows();

    // Deterministic exogenous path.
    let mut exo = Vec::with_capacity(terminal + 1);
    let mut eta = DVector::zeros(n_shocks);
    eta[shock_index] = size;
    let mut w = &solution.exo_q * eta;
    for _ in 0..=terminal {
        exo.push(w.clone());
        w = &solution.exo_p * &w;
    }
    let sel = {
        let mut sel = DMatrix::<f64>::zeros(n_shocks, n_w);
        for (j, sp) in solution.shocks.iter().enumerate() {
            sel[(j, 2 * j)] = 1.0;
            sel[(j, 2 * j + 1)] = -sp.quasi_diff;
        }
        sel
    };

    // State selection s = S u over u = (y, pi, R, b).
    let mut s_of_u = DMatrix::<f64>::zeros(n_states, 4);
    s_of_u[(0, 2)] = 1.0;
    s_of_u[(1, 3)] = 1.0;
    if n_states == 3 {
        s_of_u[(2, 1)] = 1.0;
    }

    // Terminal condition: from `terminal` on, the unconstrained policy maps
    // (s_{T-1}, w_T) into u_T.
    let mut f_term = DMatrix::<f64>::zeros(4, n_states);
    f_term
        .view_mut((0, 0), (2, n_states))
        .copy_from(&solution.f_s);
    f_term
        .view_mut((2, 0), (2, n_states))
        .copy_from(&solution.t_s.view((0, 0), (2, n_states)).into_owned());
    let mut g_term_w = DMatrix::<f64>::zeros(4, n_w);
    g_term_w.view_mut((0, 0), (2, n_w)).copy_from(&solution.f_w);
    g_term_w
        .view_mut((2, 0), (2, n_w))
        .copy_from(&solution.r_w.view((0, 0), (2, n_w)).into_owned());

    let a_b = model.debt_root();
    let fiscal_load = -p.tau_over_b() / p.beta;

    // Backward recursion: u_t = F_t s_{t-1} + g_t.
    let mut f_next = f_term.clone();
    let mut g_next: DVector<f64> = &g_term_w * &exo[terminal];
    let mut coeffs: Vec<(DMatrix<f64>, DVector<f64>)> = Vec::with_capacity(terminal);
    for t in (0..terminal).rev() {
        let e_t = &sel * &exo[t];
        let binding = window[t];

        let mut g0 = DMatrix::<f64>::zeros(4, 4);
        let mut gs = DMatrix::<f64>::zeros(4, n_states);
        let mut gf = DMatrix::<f64>::zeros(4, 4);
        let mut konst = DVector::<f64>::zeros(4);

        // Euler: y + R - y' - pi' = (1 - rho_eps) eps.
        g0[(0, 0)] = 1.0;
        g0[(0, 2)] = 1.0;
        gf[(0, 0)] = 1.0;
        gf[(0, 1)] = 1.0;
        konst[0] = (1.0 - p.rho_eps) * e_t[0];
        // Phillips curve: -kappa y + pi - beta pi' = 0.
        g0[(1, 0)] = -p.kappa;
        g0[(1, 1)] = 1.0;
        gf[(1, 1)] = p.beta;
        // Rate: rule when slack, the bound when binding.
        if binding {
            g0[(2, 2)] = 1.0;
            konst[2] = bound;
        } else {
            g0[(2, 1)] = -rule.c_pi;
            g0[(2, 2)] = 1.0;
            gs[(2, 0)] = rule.c_r_lag;
            if n_states == 3 {
                gs[(2, 2)] = rule.c_pi_lag;
            }
            konst[2] = e_t[1];
        }
        // Budget constraint: (1/beta) pi - R + b = a_b b_{t-1} + fiscal term.
        g0[(3, 1)] = 1.0 / p.beta;
        g0[(3, 2)] = -1.0;
        g0[(3, 3)] = 1.0;
        gs[(3, 1)] = a_b;
        konst[3] = fiscal_load * e_t[2];

        let lhs = &g0 - &gf * &f_next * &s_of_u;
        let lu = lhs.lu();
        let f_t = lu.solve(&gs).ok_or_else(|| {
            Error::EigenFailure("singular date system in the ZLB recursion".into())
        })?;
        let rhs = &gf * &g_next + konst;
        let g_t = lu.solve(&rhs).ok_or_else(|| {
            Error::EigenFailure("singular date system in the ZLB recursion".into())
        })?;
        coeffs.push((f_t.clone(), g_t.clone()));
        f_next = f_t;
        g_next = g_t;
    }
    coeffs.reverse();

    // Forward pass.
    let mut s = DVector::<f64>::zeros(n_states);
    let mut u_path = Vec::with_capacity(terminal + 1);
    let mut s_path = Vec::with_capacity(terminal + 1);
    for (f_t, g_t) in &coeffs {
        let u = f_t * &s + g_t;
        s = &s_of_u * &u;
        u_path.push(u);
        s_path.push(s.clone());
    }
    // One extra date from the terminal regime so forward-looking derived
    // series have a value at `terminal - 1`.
    let u_term = &f_term * &s + &g_term_w * &exo[terminal];
    u_path.push(u_term.clone());
    s_path.push(&s_of_u * &u_term);

    Ok(PiecewisePath {
        u: u_path,
        states: s_path,
        exo,
    })
}

/// Worst complementarity residual `|min(R_t - bound, rule residual_t)|` on a
/// ZLB impulse response, reconstructing the shock paths from the spec.
pub fn complementarity_residual(solved: &SolvedModel, series: &IrfSeries) -> Result<f64> {
    let model = match solved {
        SolvedModel::Nk { model, .. } => model,
        SolvedModel::Leeper { .. } => {
            return Err(Error::InvalidExperiment(
                "complementarity applies to the sticky-price ZLB paths".into(),
            ))
        }
    };
    let bound = series
        .bound
        .ok_or_else(|| Error::InvalidExperiment("series carries no bound".into()))?;
    let rule = &model.rule;
    let pi = series.series("pi").unwrap();
    let r = series.series("R").unwrap();
    // Monetary level path: nonzero only for monetary-shock experiments.
    let h = series.horizon;
    let theta: Vec<f64> = match series.shock.kind {
        super::ShockKind::Monetary => (0..h)
            .map(|t| series.shock.size * series.shock.persistence.powi(t as i32))
            .collect(),
        _ => vec![0.0; h],
    };
    let mut worst: f64 = 0.0;
    for t in 0..h {
        let pi_lag = if t > 0 { pi[t - 1] } else { 0.0 };
        let r_lag = if t > 0 { r[t - 1] } else { 0.0 };
        let theta_lag = if t > 0 { theta[t - 1] } else { 0.0 };
        let m = rule.c_theta * theta[t] + rule.c_theta_lag * theta_lag;
        let prescribed = rule.c_pi * pi[t] + rule.c_pi_lag * pi_lag + rule.c_r_lag * r_lag + m;
        let rule_residual = r[t] - prescribed;
        let slack = r[t] - bound;
        worst = worst.max(slack.min(rule_residual).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_rule, ModelParams, RuleScaling};
    use crate::simulate::ShockKind;
    use crate::tol;

    fn solved_nk(phi_p: f64, phi_pi: f64, delta: f64, gamma: f64) -> SolvedModel {
        let p = ModelParams {
            phi_p,
            phi_pi,
            delta,
            gamma,
            ..ModelParams::default()
        };
        let rc = make_rule(phi_p, phi_pi, delta, RuleScaling::Log, p.pi_ss);
        SolvedModel::from_nk_params(&p, &rc).unwrap()
    }

    fn demand(size: f64) -> ShockSpec {
        ShockSpec::new(ShockKind::Demand, size, 0.5)
    }

    #[test]
    fn infinite_bound_reproduces_linear_irf_exactly() {
        let m = solved_nk(0.0, 1.2, 0.0, 0.2);
        let shock = demand(-0.04);
        let unconstrained = irf(&m, &shock, 40).unwrap();
        let zlb = zlb_irf(&m, &shock, 40, f64::NEG_INFINITY).unwrap();
        assert_eq!(zlb.zlb_window.as_deref(), Some(&[][..]));
        for ((_, a), (_, b)) in unconstrained.columns.iter().zip(&zlb.columns) {
            assert_eq!(a, b, "paths must agree bit-for-bit");
        }
    }

    #[test]
    fn it_binds_and_plt_does_not_at_the_monetary_led_mix() {
        let bound = natural_zlb_bound(&ModelParams::default());
        let shock = demand(-0.04);

        let it = solved_nk(0.0, 1.2, 0.0, 0.2);
        let z = zlb_irf(&it, &shock, 40, bound).unwrap();
        let window = z.zlb_window.clone().unwrap();
        assert!(!window.is_empty(), "IT should hit the bound");
        let r = z.series("R").unwrap();
        assert!(r.iter().all(|&x| x >= bound - 1e-12));
        assert!(complementarity_residual(&it, &z).unwrap() < tol::ZLB_COMPLEMENTARITY);

        let plt = solved_nk(1.2, 0.0, 1.0, 0.2);
        let z = zlb_irf(&plt, &shock, 40, bound).unwrap();
        assert!(
            z.zlb_window.unwrap().is_empty(),
            "PLT should stay clear of the bound"
        );
    }

    #[test]
    fn constrained_output_falls_more_than_unconstrained() {
        let bound = natural_zlb_bound(&ModelParams::default());
        let it = solved_nk(0.0, 1.2, 0.0, 0.2);
        let shock = demand(-0.04);
        let lin = irf(&it, &shock, 40).unwrap();
        let zlb = zlb_irf(&it, &shock, 40, bound).unwrap();
        assert!(zlb.series("y").unwrap()[0] < lin.series("y").unwrap()[0]);
    }

    #[test]
    fn leeper_model_rejected() {
        let p = ModelParams {
            phi_p: -0.1,
            delta: 1.0,
            ..ModelParams::default()
        };
        let m = SolvedModel::from_leeper_params(&p).unwrap();
        assert!(zlb_irf(
            &m,
            &ShockSpec::new(ShockKind::Monetary, 0.01, 0.5),
            20,
            -0.01
        )
        .is_err());
    }

    #[test]
    fn permanently_binding_bound_errors_out() {
        // A bound above the steady state can never be escaped.
        let it = solved_nk(0.0, 1.2, 0.0, 0.2);
        let err = zlb_irf(&it, &demand(-0.04), 40, 0.5).unwrap_err();
        assert!(matches!(
            err,
            Error::ZlbNoConvergence { .. } | Error::ZlbHorizonTooShort { .. }
        ));
    }
}
