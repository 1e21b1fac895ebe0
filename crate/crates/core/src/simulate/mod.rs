//! Shock processes, impulse responses, welfare evaluation, and the
//! zero-lower-bound experiment.
//!
//! Impulse responses are deterministic perfect-foresight paths: a single
//! innovation lands at `t = 0` and propagates through the solved policy
//! `(F_s, F_w, T_s, R_w)` and the AR(1) law of each shock.

mod zlb;

pub use zlb::{complementarity_residual, natural_zlb_bound, zlb_irf};

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    build_leeper, build_nk, LeeperModel, ModelParams, NkModel, RuleCoeffs, RuleKind, Weights,
};
use crate::solver::{solve, Solution};

/// Which structural disturbance an experiment moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShockKind {
    Demand,
    Monetary,
    Fiscal,
}

impl ShockKind {
    pub fn name(self) -> &'static str {
        match self {
            ShockKind::Demand => "demand",
            ShockKind::Monetary => "monetary",
            ShockKind::Fiscal => "fiscal",
        }
    }
}

/// A one-time innovation to one AR(1) disturbance. `size` carries the sign.
/// `persistence` documents the AR(1) coefficient the experiment assumes and
/// must match the built model's process for the same shock.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ShockSpec {
    pub kind: ShockKind,
    pub size: f64,
    pub persistence: f64,
}

impl ShockSpec {
    pub fn new(kind: ShockKind, size: f64, persistence: f64) -> Self {
        ShockSpec {
            kind,
            size,
            persistence,
        }
    }
}

/// A model built and solved together, so experiments can reach both the
/// structural description and the policy function.
#[derive(Debug, Clone)]
pub enum SolvedModel {
    Leeper {
        model: LeeperModel,
        solution: Solution,
    },
    Nk {
        model: NkModel,
        solution: Solution,
    },
}

impl SolvedModel {
    pub fn from_leeper_params(params: &ModelParams) -> Result<Self> {
        let model = build_leeper(params)?;
        let solution = solve(&model.system)?;
        Ok(SolvedModel::Leeper { model, solution })
    }

    pub fn from_nk_params(params: &ModelParams, rule: &RuleCoeffs) -> Result<Self> {
        let model = build_nk(params, rule)?;
        let solution = solve(&model.system)?;
        Ok(SolvedModel::Nk { model, solution })
    }

    pub fn solution(&self) -> &Solution {
        match self {
            SolvedModel::Leeper { solution, .. } => solution,
            SolvedModel::Nk { solution, .. } => solution,
        }
    }

    pub fn params(&self) -> &ModelParams {
        match self {
            SolvedModel::Leeper { model, .. } => &model.params,
            SolvedModel::Nk { model, .. } => &model.params,
        }
    }

    pub fn rule_kind(&self) -> RuleKind {
        match self {
            SolvedModel::Leeper { model, .. } => model.rule_kind,
            SolvedModel::Nk { model, .. } => model.rule_kind,
        }
    }

    /// Rule inertia, `delta`.
    fn rule_delta(&self) -> f64 {
        match self {
            SolvedModel::Leeper { model, .. } => model.rule.c_r_lag,
            SolvedModel::Nk { model, .. } => model.rule.c_r_lag,
        }
    }

    /// "AM/PF" / "PM/AF" when determinate with clear stances, otherwise the
    /// verdict label.
    pub fn regime_label(&self) -> String {
        use crate::determinacy::{
            leeper_predicate, leeper_predicate_it, nk_predicate, nk_predicate_it, MapVerdict,
            Stance,
        };
        let p = self.params();
        let v = match (self, self.rule_kind()) {
            (SolvedModel::Leeper { .. }, RuleKind::It) => {
                leeper_predicate_it(p.phi_pi, p.gamma, p.beta, p.pi_ss)
            }
            (SolvedModel::Leeper { .. }, _) => leeper_predicate(p.phi_p, p.gamma, p.beta, p.pi_ss),
            (SolvedModel::Nk { .. }, RuleKind::It) => {
                nk_predicate_it(p.phi_pi, p.gamma, p.beta, p.tau_over_b())
            }
            (SolvedModel::Nk { .. }, _) => {
                nk_predicate(p.phi_p, p.gamma, p.beta, p.tau_over_b(), p.kappa)
            }
        };
        match (v.verdict, v.monetary, v.fiscal) {
            (MapVerdict::Determinate, Stance::Active, Stance::Passive) => "AM/PF".into(),
            (MapVerdict::Determinate, Stance::Passive, Stance::Active) => "PM/AF".into(),
            (verdict, _, _) => format!("{verdict:?}"),
        }
    }
}

/// Labeled per-variable impulse-response paths.
#[derive(Debug, Clone, Serialize)]
pub struct IrfSeries {
    pub horizon: usize,
    pub shock: ShockSpec,
    pub regime: String,
    pub rule: String,
    /// Ordered `(name, path)` columns; primitive variables first, derived
    /// series after them.
    pub columns: Vec<(String, Vec<f64>)>,
    /// Dates where the lower bound binds, when produced by the ZLB solver.
    pub zlb_window: Option<Vec<usize>>,
    pub bound: Option<f64>,
}

impl IrfSeries {
    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn names(&self) -> Vec<&str> {
        self.columns.iter().map(|(n, _)| n.as_str()).collect()
    }
}

/// Raw propagation: jumps, states, and exogenous state for `horizon + 1`
/// periods (one beyond, so derived forward-looking series can be formed).
pub(crate) struct RawPath {
    pub jumps: Vec<DVector<f64>>,
    pub states: Vec<DVector<f64>>,
    pub exo: Vec<DVector<f64>>,
}

pub(crate) fn propagate(sol: &Solution, shock_index: usize, size: f64, horizon: usize) -> RawPath {
    let n_w = sol.exo_p.nrows();
    let mut eta = DVector::zeros(sol.shock_names.len());
    eta[shock_index] = size;
    let mut w = &sol.exo_q * eta;
    let mut s_prev = DVector::zeros(sol.n_states());
    let mut jumps = Vec::with_capacity(horizon + 1);
    let mut states = Vec::with_capacity(horizon + 1);
    let mut exo = Vec::with_capacity(horizon + 1);
    for _ in 0..=horizon {
        let y = &sol.f_s * &s_prev + &sol.f_w * &w;
        let s = &sol.t_s * &s_prev + &sol.r_w * &w;
        jumps.push(y);
        states.push(s.clone());
        exo.push(w.clone());
        s_prev = s;
        w = &sol.exo_p * &w;
        debug_assert_eq!(w.len(), n_w);
    }
    RawPath { jumps, states, exo }
}

fn validate_shock(model: &SolvedModel, shock: &ShockSpec) -> Result<usize> {
    let sol = model.solution();
    let idx = sol
        .shock_names
        .iter()
        .position(|n| n == shock.kind.name())
        .ok_or_else(|| {
            Error::InvalidExperiment(format!(
                "model has no '{}' shock (available: {})",
                shock.kind.name(),
                sol.shock_names.join(", ")
            ))
        })?;
    let rho = sol.shocks[idx].rho;
    if (rho - shock.persistence).abs() > 1e-12 {
        return Err(Error::InvalidExperiment(format!(
            "shock persistence {} disagrees with the model's {} process (rho = {})",
            shock.persistence,
            shock.kind.name(),
            rho
        )));
    }
    if !shock.size.is_finite() {
        return Err(Error::InvalidExperiment("shock size must be finite".into()));
    }
    Ok(idx)
}

/// Deterministic impulse response to a one-time innovation at `t = 0`.
pub fn irf(model: &SolvedModel, shock: &ShockSpec, horizon: usize) -> Result<IrfSeries> {
    if horizon == 0 {
        return Err(Error::InvalidExperiment(
            "horizon must be at least 1".into(),
        ));
    }
    let idx = validate_shock(model, shock)?;
    let sol = model.solution();
    let raw = propagate(sol, idx, shock.size, horizon);
    let columns = assemble_columns(model, shock, &raw, horizon);
    Ok(IrfSeries {
        horizon,
        shock: *shock,
        regime: model.regime_label(),
        rule: model.rule_kind().label().to_string(),
        columns,
        zlb_window: None,
        bound: None,
    })
}

pub(crate) fn assemble_columns(
    model: &SolvedModel,
    shock: &ShockSpec,
    raw: &RawPath,
    horizon: usize,
) -> Vec<(String, Vec<f64>)> {
    let p = model.params();
    let delta = model.rule_delta();
    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    match model {
        SolvedModel::Leeper { .. } => {
            let pi: Vec<f64> = (0..horizon).map(|t| raw.jumps[t][0]).collect();
            let r: Vec<f64> = (0..horizon).map(|t| raw.states[t][0]).collect();
            let b: Vec<f64> = (0..horizon).map(|t| raw.states[t][1]).collect();
            // Money demand and the tax rule recover the substituted-out
            // variables; taxes respond to debt with a one-period lag.
            let md = p.c_ss / ((p.r_ss - 1.0) * (p.r_ss - 1.0));
            let m: Vec<f64> = r.iter().map(|x| -md * x).collect();
            let psi_col = 2; // (level, lag) pairs: monetary at 0, fiscal at 2
            let tau: Vec<f64> = (0..horizon)
                .map(|t| {
                    let b_lag = if t == 0 { 0.0 } else { b[t - 1] };
                    p.gamma * b_lag + raw.exo[t][psi_col]
                })
                .collect();
            let p_gap = price_gap(&pi, delta, 1.0 / p.pi_ss);
            columns.push(("pi".into(), pi));
            columns.push(("R".into(), r));
            columns.push(("b".into(), b));
            columns.push(("m".into(), m));
            columns.push(("tau".into(), tau));
            columns.push(("p_gap".into(), p_gap));
        }
        SolvedModel::Nk { .. } => {
            let y: Vec<f64> = (0..horizon).map(|t| raw.jumps[t][0]).collect();
            let pi: Vec<f64> = (0..horizon).map(|t| raw.jumps[t][1]).collect();
            let r: Vec<f64> = (0..horizon).map(|t| raw.states[t][0]).collect();
            let b: Vec<f64> = (0..horizon).map(|t| raw.states[t][1]).collect();
            // Real rate against next period's realized inflation; the extra
            // propagated period supplies the terminal value.
            let real_rate: Vec<f64> = (0..horizon).map(|t| r[t] - raw.jumps[t + 1][1]).collect();
            let p_gap = price_gap(&pi, delta, 1.0);
            columns.push(("y".into(), y));
            columns.push(("pi".into(), pi));
            columns.push(("R".into(), r));
            columns.push(("b".into(), b));
            columns.push(("p_gap".into(), p_gap));
            columns.push(("real_rate".into(), real_rate));
        }
    }
    let sol = model.solution();
    if let Some(j) = sol.shock_names.iter().position(|n| n == shock.kind.name()) {
        let level: Vec<f64> = (0..horizon).map(|t| raw.exo[t][2 * j]).collect();
        columns.push((shock.kind.name().to_string(), level));
    }
    columns
}

/// Price-level gap implied by the rule's target updating:
/// `p_t = delta * p_{t-1} + scale * pi_t`.
fn price_gap(pi: &[f64], delta: f64, scale: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(pi.len());
    let mut prev = 0.0;
    for &x in pi {
        prev = delta * prev + scale * x;
        out.push(prev);
    }
    out
}

/// Discounted quadratic loss decomposition of one impulse response.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LossReport {
    /// Discounted sum of squared inflation deviations.
    pub l_pi: f64,
    /// Discounted sum of squared output gaps.
    pub l_x: f64,
    /// Discounted sum of squared rate deviations from the steady-state path.
    pub l_r: f64,
    /// `omega_pi * l_pi + omega_x * l_x + omega_r * l_r`.
    pub l_total: f64,
    pub horizon: usize,
    /// Geometric-envelope estimate of the truncated tail, from the terminal
    /// decay of the paths.
    pub tail_bound: f64,
}

/// Evaluates the loss function on an impulse response.
///
/// The rate term is squared like the others, with the steady-state path as
/// the rate target, and the output gap is the output deviation itself.
pub fn welfare_loss(irf: &IrfSeries, weights: &Weights, beta: f64) -> Result<LossReport> {
    if weights.omega_pi < 0.0 || weights.omega_x < 0.0 || weights.omega_r < 0.0 {
        return Err(Error::InvalidExperiment(
            "welfare weights must be non-negative".into(),
        ));
    }
    let pi = irf
        .series("pi")
        .ok_or_else(|| Error::InvalidExperiment("impulse response lacks a pi series".into()))?;
    let x = irf.series("y").ok_or_else(|| {
        Error::InvalidExperiment(
            "impulse response lacks an output series; welfare evaluation needs the sticky-price model"
                .into(),
        )
    })?;
    let r = irf
        .series("R")
        .ok_or_else(|| Error::InvalidExperiment("impulse response lacks an R series".into()))?;

    let mut l_pi = 0.0;
    let mut l_x = 0.0;
    let mut l_r = 0.0;
    let mut disc = 1.0;
    for t in 0..irf.horizon {
        l_pi += disc * pi[t] * pi[t];
        l_x += disc * x[t] * x[t];
        l_r += disc * r[t] * r[t];
        disc *= beta;
    }
    let tail_bound = tail_estimate(&[pi, x, r], beta, irf.horizon);
    Ok(LossReport {
        l_pi,
        l_x,
        l_r,
        l_total: weights.omega_pi * l_pi + weights.omega_x * l_x + weights.omega_r * l_r,
        horizon: irf.horizon,
        tail_bound,
    })
}

fn tail_estimate(series: &[&[f64]], beta: f64, horizon: usize) -> f64 {
    let mut bound = 0.0;
    for s in series {
        let n = s.len();
        if n < 2 {
            continue;
        }
        let last = s[n - 1].abs();
        let prev = s[n - 2].abs().max(f64::MIN_POSITIVE);
        let ratio = (last / prev).min(0.9999);
        let geo = beta * ratio * ratio;
        bound += beta.powi(horizon as i32) * last * last / (1.0 - geo);
    }
    bound
}

/// Gamma switching used by the welfare figure: active fiscal when monetary
/// policy is passive, passive fiscal when it is active.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GammaSchedule {
    /// Gamma when monetary policy is passive (active fiscal side).
    pub active_fiscal_gamma: f64,
    /// Gamma when monetary policy is active (passive fiscal side).
    pub passive_fiscal_gamma: f64,
}

impl Default for GammaSchedule {
    fn default() -> Self {
        GammaSchedule {
            active_fiscal_gamma: 0.0,
            passive_fiscal_gamma: 0.2,
        }
    }
}

/// One point of a welfare sweep. Points at the activeness cut-off or without
/// a determinate equilibrium carry no loss and are emitted as gaps.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub coef: f64,
    pub gamma: Option<f64>,
    pub verdict: String,
    pub loss: Option<LossReport>,
}

/// Sweeps the rule coefficient over `coefs` for the sticky-price model,
/// switching gamma by the monetary stance at each point.
pub fn welfare_sweep(
    params: &ModelParams,
    rule: RuleKind,
    coefs: &[f64],
    schedule: &GammaSchedule,
    shock: &ShockSpec,
    horizon: usize,
) -> Result<Vec<SweepPoint>> {
    use crate::model::{make_rule, RuleScaling};
    let cutoff = match rule {
        RuleKind::It => 1.0,
        RuleKind::Plt => 0.0,
        RuleKind::General => {
            return Err(Error::UnsupportedRule(
                "welfare sweeps cover the strict IT and PLT rules".into(),
            ))
        }
    };
    let mut out = Vec::with_capacity(coefs.len());
    for &coef in coefs {
        if coef == cutoff {
            out.push(SweepPoint {
                coef,
                gamma: None,
                verdict: "cutoff".into(),
                loss: None,
            });
            continue;
        }
        let gamma = if coef > cutoff {
            schedule.passive_fiscal_gamma
        } else {
            schedule.active_fiscal_gamma
        };
        let mut p = params.clone();
        p.gamma = gamma;
        match rule {
            RuleKind::It => {
                p.phi_pi = coef;
                p.phi_p = 0.0;
                p.delta = 0.0;
            }
            RuleKind::Plt => {
                p.phi_p = coef;
                p.phi_pi = 0.0;
                p.delta = 1.0;
            }
            RuleKind::General => unreachable!(),
        }
        let rc = make_rule(p.phi_p, p.phi_pi, p.delta, RuleScaling::Log, p.pi_ss);
        match SolvedModel::from_nk_params(&p, &rc) {
            Ok(solved) => {
                let response = irf(&solved, shock, horizon)?;
                let loss = welfare_loss(&response, &p.weights, p.beta)?;
                out.push(SweepPoint {
                    coef,
                    gamma: Some(gamma),
                    verdict: "D".into(),
                    loss: Some(loss),
                });
            }
            Err(Error::NotDeterminate { verdict, .. }) => out.push(SweepPoint {
                coef,
                gamma: Some(gamma),
                verdict: verdict.to_string(),
                loss: None,
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_rule, RuleScaling};
    use approx::assert_abs_diff_eq;

    fn nk_solved(phi_p: f64, phi_pi: f64, delta: f64, gamma: f64) -> SolvedModel {
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
    fn zero_size_gives_zero_paths() {
        let m = nk_solved(-0.1, 0.0, 1.0, 0.0);
        let r = irf(&m, &demand(0.0), 20).unwrap();
        for (_, path) in &r.columns {
            assert!(path.iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn zero_horizon_rejected() {
        let m = nk_solved(-0.1, 0.0, 1.0, 0.0);
        assert!(matches!(
            irf(&m, &demand(-0.01), 0),
            Err(Error::InvalidExperiment(_))
        ));
    }

    #[test]
    fn persistence_mismatch_rejected() {
        let m = nk_solved(-0.1, 0.0, 1.0, 0.0);
        let bad = ShockSpec::new(ShockKind::Demand, -0.01, 0.9);
        assert!(irf(&m, &bad, 10).is_err());
    }

    #[test]
    fn fiscally_led_plt_raises_rate_after_negative_demand_shock() {
        let m = nk_solved(-0.1, 0.0, 1.0, 0.0);
        let r = irf(&m, &demand(-0.01), 40).unwrap();
        assert_eq!(r.regime, "PM/AF");
        assert!(r.series("R").unwrap()[0] > 0.0);
    }

    #[test]
    fn ricardian_fiscal_shock_leaves_activity_flat() {
        let m = nk_solved(0.0, 1.2, 0.0, 0.2);
        let shock = ShockSpec::new(ShockKind::Fiscal, 0.01, 0.5);
        let r = irf(&m, &shock, 40).unwrap();
        for name in ["y", "pi", "R"] {
            let peak = r
                .series(name)
                .unwrap()
                .iter()
                .fold(0.0f64, |a, v| a.max(v.abs()));
            assert!(
                peak < 1e-10,
                "{name} moved by {peak:e} after a lump-sum tax shock"
            );
        }
        let debt_peak = r
            .series("b")
            .unwrap()
            .iter()
            .fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(debt_peak > 1e-4, "debt itself should move");
    }

    #[test]
    fn irf_is_linear_in_shock_size() {
        let m = nk_solved(1.2, 0.0, 1.0, 0.2);
        let r1 = irf(&m, &demand(-0.01), 30).unwrap();
        let r2 = irf(&m, &demand(-0.02), 30).unwrap();
        for ((_, a), (_, b)) in r1.columns.iter().zip(&r2.columns) {
            for (x, y) in a.iter().zip(b) {
                assert_abs_diff_eq!(2.0 * x, *y, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn price_gap_accumulates_under_plt_and_resets_under_it() {
        let plt = nk_solved(1.2, 0.0, 1.0, 0.2);
        let r = irf(&plt, &demand(-0.01), 10).unwrap();
        let pi = r.series("pi").unwrap();
        let gap = r.series("p_gap").unwrap();
        assert_abs_diff_eq!(gap[2], pi[0] + pi[1] + pi[2], epsilon = 1e-14);

        let it = nk_solved(0.0, 1.2, 0.0, 0.2);
        let r = irf(&it, &demand(-0.01), 10).unwrap();
        let pi = r.series("pi").unwrap();
        let gap = r.series("p_gap").unwrap();
        assert_abs_diff_eq!(gap[2], pi[2], epsilon = 1e-14);
    }

    #[test]
    fn welfare_decomposition_is_exact() {
        let m = nk_solved(0.0, 0.9, 0.0, 0.0);
        let r = irf(&m, &demand(-0.01), 500).unwrap();
        let w = Weights {
            omega_pi: 0.7,
            omega_x: 1.3,
            omega_r: 0.2,
        };
        let loss = welfare_loss(&r, &w, 0.99).unwrap();
        assert_eq!(
            loss.l_total,
            w.omega_pi * loss.l_pi + w.omega_x * loss.l_x + w.omega_r * loss.l_r
        );
        assert!(loss.l_pi >= 0.0 && loss.l_x >= 0.0 && loss.l_r >= 0.0);
    }

    #[test]
    fn zero_irf_gives_zero_loss() {
        let m = nk_solved(0.0, 0.9, 0.0, 0.0);
        let r = irf(&m, &demand(0.0), 100).unwrap();
        let loss = welfare_loss(&r, &Weights::default(), 0.99).unwrap();
        assert_eq!(
            (loss.l_pi, loss.l_x, loss.l_r, loss.l_total),
            (0.0, 0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn negative_weights_rejected() {
        let m = nk_solved(0.0, 0.9, 0.0, 0.0);
        let r = irf(&m, &demand(-0.01), 50).unwrap();
        let w = Weights {
            omega_pi: -1.0,
            ..Weights::default()
        };
        assert!(welfare_loss(&r, &w, 0.99).is_err());
    }

    #[test]
    fn leeper_irf_recovers_money_and_taxes() {
        let p = ModelParams {
            phi_p: -0.1,
            phi_pi: 0.0,
            delta: 1.0,
            gamma: 0.0,
            ..ModelParams::default()
        };
        let m = SolvedModel::from_leeper_params(&p).unwrap();
        let shock = ShockSpec::new(ShockKind::Fiscal, 0.01, 0.5);
        let r = irf(&m, &shock, 20).unwrap();
        let md = p.c_ss / ((p.r_ss - 1.0) * (p.r_ss - 1.0));
        let rr = r.series("R").unwrap();
        let mm = r.series("m").unwrap();
        for t in 0..20 {
            assert_abs_diff_eq!(mm[t], -md * rr[t], epsilon = 1e-12);
        }
        // gamma = 0: taxes move only with the fiscal shock itself.
        let tau = r.series("tau").unwrap();
        let psi = r.series("fiscal").unwrap();
        for t in 0..20 {
            assert_abs_diff_eq!(tau[t], psi[t], epsilon = 1e-14);
        }
    }

    #[test]
    fn sweep_marks_cutoff_and_non_determinate_points() {
        let params = ModelParams::default();
        let shock = demand(-0.01);
        let points = welfare_sweep(
            &params,
            RuleKind::It,
            &[0.9, 1.0, 1.2],
            &GammaSchedule::default(),
            &shock,
            200,
        )
        .unwrap();
        assert!(points[0].loss.is_some());
        assert!(points[1].loss.is_none());
        assert_eq!(points[1].verdict, "cutoff");
        assert!(points[2].loss.is_some());
    }
}
