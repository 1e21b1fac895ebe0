//! The four subcommands: classify, irf, welfare, map.

use std::io::Write as _;
use std::path::Path;

use mfplt_core::determinacy::{
    self, leeper_predicate, leeper_predicate_it, linspace, nk_predicate, nk_predicate_it,
    MapVerdict, ModelKind, RegimeVerdict, Stance,
};
use mfplt_core::export;
use mfplt_core::model::{build_leeper, build_nk, RuleKind};
use mfplt_core::simulate::{
    irf, natural_zlb_bound, welfare_loss, welfare_sweep, zlb_irf, GammaSchedule, IrfSeries,
    ShockSpec, SolvedModel,
};
use mfplt_core::solver::classify;
use mfplt_core::Error as CoreError;

use crate::config::{Bound, OutputFormat, RunConfig};

/// A command failure with its process exit code: 2 for configuration
/// problems, 3 for non-determinate requests, 4 for ZLB non-convergence,
/// 1 otherwise.
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::InvalidParams(_)
            | CoreError::SteadyState { .. }
            | CoreError::UnsupportedRule(_)
            | CoreError::InvalidExperiment(_)
            | CoreError::WrongRegime { .. } => 2,
            CoreError::NotDeterminate { .. } => 3,
            CoreError::ZlbNoConvergence { .. } | CoreError::ZlbHorizonTooShort { .. } => 4,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn write_output(out: Option<&Path>, content: &str) -> CmdResult {
    match out {
        Some(path) => {
            std::fs::write(path, content).map_err(|e| Failure {
                code: 1,
                message: format!("{}: {e}", path.display()),
            })?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes()).map_err(|e| Failure {
                code: 1,
                message: e.to_string(),
            })?;
        }
    }
    Ok(())
}

fn analytic_verdict(cfg: &RunConfig) -> Option<RegimeVerdict> {
    let p = &cfg.params;
    match (cfg.model, cfg.rule) {
        (ModelKind::Leeper, RuleKind::Plt) => {
            Some(leeper_predicate(p.phi_p, p.gamma, p.beta, p.pi_ss))
        }
        (ModelKind::Leeper, RuleKind::It) => {
            Some(leeper_predicate_it(p.phi_pi, p.gamma, p.beta, p.pi_ss))
        }
        (ModelKind::Nk, RuleKind::Plt) => Some(nk_predicate(
            p.phi_p,
            p.gamma,
            p.beta,
            p.tau_over_b(),
            p.kappa,
        )),
        (ModelKind::Nk, RuleKind::It) => {
            Some(nk_predicate_it(p.phi_pi, p.gamma, p.beta, p.tau_over_b()))
        }
        (_, RuleKind::General) => None,
    }
}

fn regime_suffix(v: &RegimeVerdict) -> &'static str {
    match (v.verdict, v.monetary, v.fiscal) {
        (MapVerdict::Determinate, Stance::Active, Stance::Passive) => " (AM/PF)",
        (MapVerdict::Determinate, Stance::Passive, Stance::Active) => " (PM/AF)",
        _ => "",
    }
}

fn build_system(cfg: &RunConfig) -> Result<mfplt_core::model::LinearReModel, Failure> {
    Ok(match cfg.model {
        ModelKind::Leeper => build_leeper(&cfg.params)?.system,
        ModelKind::Nk => build_nk(&cfg.params, &cfg.rule_coeffs())?.system,
    })
}

/// `classify`: eigenvalue table plus numeric and analytic verdicts.
pub fn cmd_classify(cfg: &RunConfig) -> CmdResult {
    let system = build_system(cfg)?;
    let classification = classify(&system)?;
    let analytic = analytic_verdict(cfg);

    if cfg.format == Some(OutputFormat::Json) {
        let doc = serde_json::json!({
            "model": cfg.model,
            "rule": cfg.rule.label(),
            "classification": classification,
            "analytic": analytic,
        });
        let mut text = export::to_json_12(&doc);
        text.push('\n');
        return write_output(cfg.out.as_deref(), &text);
    }

    let mut out = String::new();
    out.push_str(&format!(
        "model: {:?}  rule: {}  (phi_p={}, phi_pi={}, delta={}, gamma={})\n",
        cfg.model,
        cfg.rule.label(),
        cfg.params.phi_p,
        cfg.params.phi_pi,
        cfg.params.delta,
        cfg.params.gamma
    ));
    out.push_str("eigenvalues (modulus, re, im):\n");
    for z in &classification.eigenvalues {
        out.push_str(&format!(
            "  {}  {}  {}\n",
            export::fmt_sig(z.norm()),
            export::fmt_sig(z.re),
            export::fmt_sig(z.im)
        ));
    }
    let numeric_label = if classification.is_boundary() {
        "Boundary".to_string()
    } else {
        classification.verdict.label().to_string()
    };
    out.push_str(&format!(
        "numeric: {numeric_label} ({} unstable, {} jumps)\n",
        classification.n_unstable, classification.n_jumps
    ));
    match &analytic {
        Some(v) => {
            out.push_str(&format!("analytic: {:?}{}\n", v.verdict, regime_suffix(v)));
            if let Some(note) = &v.note {
                out.push_str(&format!("note: {note}\n"));
            }
        }
        None => out.push_str("analytic: n/a (general rule has no closed-form predicate)\n"),
    }
    write_output(cfg.out.as_deref(), &out)
}

fn shock_spec(cfg: &RunConfig) -> ShockSpec {
    let p = &cfg.params;
    let rho = match cfg.experiment.shock {
        mfplt_core::simulate::ShockKind::Demand => p.rho_eps,
        mfplt_core::simulate::ShockKind::Monetary => p.rho_theta,
        mfplt_core::simulate::ShockKind::Fiscal => p.rho_psi,
    };
    ShockSpec::new(cfg.experiment.shock, cfg.experiment.size, rho)
}

fn solve_configured(cfg: &RunConfig) -> Result<SolvedModel, Failure> {
    Ok(match cfg.model {
        ModelKind::Leeper => SolvedModel::from_leeper_params(&cfg.params)?,
        ModelKind::Nk => SolvedModel::from_nk_params(&cfg.params, &cfg.rule_coeffs())?,
    })
}

fn sign_of(x: f64) -> &'static str {
    if x.abs() < 1e-12 {
        "0"
    } else if x > 0.0 {
        "+"
    } else {
        "-"
    }
}

fn irf_summary(series: &IrfSeries) -> String {
    let mut s = format!(
        "shock={} size={} regime={} rule={}",
        series.shock.kind.name(),
        export::fmt_sig(series.shock.size),
        series.regime,
        series.rule
    );
    let primitives: Vec<&str> = series
        .names()
        .into_iter()
        .filter(|n| ["y", "pi", "R", "b"].contains(n))
        .collect();
    s.push_str(" impact:");
    for name in &primitives {
        let path = series.series(name).unwrap();
        s.push_str(&format!(" {name}:{}", sign_of(path[0])));
    }
    let activity: Vec<&str> = primitives.iter().copied().filter(|n| *n != "b").collect();
    let flat = activity
        .iter()
        .all(|n| series.series(n).unwrap().iter().all(|v| v.abs() < 1e-12));
    if flat && !activity.is_empty() {
        s.push_str(&format!(" [{} flat (Ricardian)]", activity.join(",")));
    }
    if let Some(window) = &series.zlb_window {
        if window.is_empty() {
            s.push_str(" [bound never binds]");
        } else {
            s.push_str(&format!(" [bound binds at t={window:?}]"));
        }
    }
    s
}

/// `irf`: CSV (or JSON) path data plus a one-line summary.
pub fn cmd_irf(cfg: &RunConfig) -> CmdResult {
    let solved = solve_configured(cfg)?;
    let shock = shock_spec(cfg);
    let series = match cfg.experiment.bound {
        Bound::None => irf(&solved, &shock, cfg.experiment.horizon)?,
        Bound::Auto => zlb_irf(
            &solved,
            &shock,
            cfg.experiment.horizon,
            natural_zlb_bound(&cfg.params),
        )?,
        Bound::Value(v) => zlb_irf(&solved, &shock, cfg.experiment.horizon, v)?,
    };
    let payload = match cfg.format {
        Some(OutputFormat::Json) => {
            let mut text = export::to_json_12(&series);
            text.push('\n');
            text
        }
        None | Some(OutputFormat::Csv) => export::irf_csv(&series),
        Some(OutputFormat::Text) => {
            return Err(Failure::config("irf output format must be csv or json"))
        }
    };
    let summary = irf_summary(&series);
    write_output(cfg.out.as_deref(), &payload)?;
    if cfg.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn coef_grid(cfg: &RunConfig) -> Result<Vec<f64>, Failure> {
    let (default_min, default_max) = match cfg.rule {
        RuleKind::It => (0.05, 2.0),
        RuleKind::Plt => (-0.95, 2.0),
        RuleKind::General => {
            return Err(Failure::config(
                "sweeps need rule kind 'it' or 'plt' to know which coefficient to move",
            ))
        }
    };
    let lo = cfg.experiment.coef_min.unwrap_or(default_min);
    let hi = cfg.experiment.coef_max.unwrap_or(default_max);
    let n = cfg.experiment.coef_steps;
    if n == 0 || (n == 1 && lo != hi) || hi < lo {
        return Err(Failure::config(format!(
            "bad coefficient grid: [{lo}, {hi}] with {n} steps"
        )));
    }
    Ok(if n == 1 {
        vec![lo]
    } else {
        linspace(lo, hi, n)
    })
}

/// `welfare`: loss curves over the coefficient grid (CSV) and the loss at
/// the configured point (JSON).
pub fn cmd_welfare(cfg: &RunConfig) -> CmdResult {
    if cfg.model != ModelKind::Nk {
        return Err(Failure::config(
            "welfare evaluation uses the sticky-price model; set model kind = nk",
        ));
    }
    let grid = coef_grid(cfg)?;
    let schedule = GammaSchedule {
        active_fiscal_gamma: cfg.experiment.gamma_active,
        passive_fiscal_gamma: cfg.experiment.gamma_passive,
    };
    let shock = shock_spec(cfg);
    let horizon = cfg.experiment.horizon.max(500);
    let points = welfare_sweep(&cfg.params, cfg.rule, &grid, &schedule, &shock, horizon)?;
    let coef_name = match cfg.rule {
        RuleKind::It => "phi_pi",
        _ => "phi_p",
    };
    let csv = export::sweep_csv(coef_name, &points);

    // Loss at the configured parameter point itself.
    let solved = solve_configured(cfg)?;
    let own = welfare_loss(
        &irf(&solved, &shock, horizon)?,
        &cfg.params.weights,
        cfg.params.beta,
    )?;
    let mut totals = export::loss_json(&own)?;
    totals.push('\n');

    write_output(cfg.out.as_deref(), &csv)?;
    if cfg.out.is_some() {
        print!("{totals}");
    } else {
        eprint!("{totals}");
    }
    Ok(())
}

/// `map`: cross-validated determinacy map as JSON.
pub fn cmd_map(cfg: &RunConfig) -> CmdResult {
    let coef = coef_grid(cfg)?;
    let (gdef_min, gdef_max) = match cfg.model {
        ModelKind::Leeper => (0.0, 2.2),
        ModelKind::Nk => (0.0, 10.0),
    };
    let glo = cfg.experiment.gamma_min.unwrap_or(gdef_min);
    let ghi = cfg.experiment.gamma_max.unwrap_or(gdef_max);
    let gn = cfg.experiment.gamma_steps;
    if gn == 0 || (gn == 1 && glo != ghi) || ghi < glo {
        return Err(Failure::config(format!(
            "bad gamma grid: [{glo}, {ghi}] with {gn} steps"
        )));
    }
    let gammas = if gn == 1 {
        vec![glo]
    } else {
        linspace(glo, ghi, gn)
    };
    let map = determinacy::sweep(cfg.model, cfg.rule, &cfg.params, &coef, &gammas)?;
    let mut text = export::regime_map_json(&map)?;
    text.push('\n');
    write_output(cfg.out.as_deref(), &text)?;
    eprintln!(
        "map: {} x {} cells, {} disagreements, {} boundary",
        coef.len(),
        gammas.len(),
        map.n_disagreements(),
        map.n_boundary
    );
    Ok(())
}
