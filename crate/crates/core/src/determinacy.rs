//! Analytic determinacy predicates and 2-D regime maps.
//!
//! The predicates locate each policy authority's stance from the closed-form
//! root it controls — the policy root of the rate rule and the fiscal root
//! of the debt equation — and read the verdict off the active/passive
//! pairing. They are independent of the numerical classifier, which is what
//! makes the cross-validated [`sweep`] a meaningful check.
//!
//! Stances are defined by root modulus, not by the sign shorthand: under the
//! PLT rule monetary policy is active when `|1 + beta*phi_p/pi| > 1`, which
//! on the empirically relevant range `phi_p > -2 pi/beta` coincides with
//! `phi_p > 0`. Likewise the fiscal stance uses the full two-sided condition
//! `|(1/beta)(1 - (tau/b) gamma)| < 1` for passivity; the one-sided reading
//! `gamma < (b/tau)(1 + beta)` alone would label small `gamma` passive while
//! the debt root is explosive, so that region is reported with a diagnostic
//! note instead of silently picking either reading.

use serde::Serialize;

use crate::error::Result;
use crate::model::{build_leeper, build_nk, make_rule, ModelParams, RuleKind, RuleScaling};
use crate::solver::{classify, Verdict};
use crate::tol;

/// Stance of one policy authority, from the modulus of its root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stance {
    Active,
    Passive,
    /// Root within the boundary band of the unit circle.
    Boundary,
}

/// Verdict of an analytic predicate (classifier verdicts plus knife edges).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MapVerdict {
    Determinate,
    Indeterminate,
    NoStableSolution,
    Boundary,
}

impl MapVerdict {
    pub fn code(self) -> &'static str {
        match self {
            MapVerdict::Determinate => "D",
            MapVerdict::Indeterminate => "I",
            MapVerdict::NoStableSolution => "N",
            MapVerdict::Boundary => "B",
        }
    }

    fn from_classifier(v: Verdict) -> Self {
        match v {
            Verdict::Determinate => MapVerdict::Determinate,
            Verdict::Indeterminate => MapVerdict::Indeterminate,
            Verdict::NoStableSolution => MapVerdict::NoStableSolution,
        }
    }
}

/// Analytic regime verdict with the stances behind it.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeVerdict {
    pub monetary: Stance,
    pub fiscal: Stance,
    pub verdict: MapVerdict,
    /// Diagnostic for parameter regions where published shorthand and the
    /// root condition disagree.
    pub note: Option<String>,
}

fn stance_from_root(modulus: f64) -> Stance {
    if (modulus - 1.0).abs() <= tol::BOUNDARY_BAND {
        Stance::Boundary
    } else if modulus > 1.0 {
        Stance::Active
    } else {
        Stance::Passive
    }
}

fn pair_verdict(monetary: Stance, fiscal: Stance) -> MapVerdict {
    match (monetary, fiscal) {
        (Stance::Boundary, _) | (_, Stance::Boundary) => MapVerdict::Boundary,
        (Stance::Active, Stance::Passive) | (Stance::Passive, Stance::Active) => {
            MapVerdict::Determinate
        }
        (Stance::Passive, Stance::Passive) => MapVerdict::Indeterminate,
        (Stance::Active, Stance::Active) => MapVerdict::NoStableSolution,
    }
}

/// Flexible-price model predicate under the strict PLT rule.
///
/// Monetary root `1 + beta*phi_p/pi_ss`, fiscal root `1/beta - gamma`.
pub fn leeper_predicate(phi_p: f64, gamma: f64, beta: f64, pi_ss: f64) -> RegimeVerdict {
    let monetary = stance_from_root((1.0 + beta * phi_p / pi_ss).abs());
    let fiscal = stance_from_root((1.0 / beta - gamma).abs());
    RegimeVerdict {
        monetary,
        fiscal,
        verdict: pair_verdict(monetary, fiscal),
        note: None,
    }
}

/// Flexible-price model predicate under the strict IT rule.
///
/// Monetary root `beta*phi_pi/pi_ss`, fiscal root `1/beta - gamma`.
pub fn leeper_predicate_it(phi_pi: f64, gamma: f64, beta: f64, pi_ss: f64) -> RegimeVerdict {
    let monetary = stance_from_root((beta * phi_pi / pi_ss).abs());
    let fiscal = stance_from_root((1.0 / beta - gamma).abs());
    RegimeVerdict {
        monetary,
        fiscal,
        verdict: pair_verdict(monetary, fiscal),
        note: None,
    }
}

fn nk_fiscal_stance(gamma: f64, beta: f64, tau_over_b: f64) -> (Stance, Option<String>) {
    let root = (1.0 - tau_over_b * gamma) / beta;
    let stance = stance_from_root(root.abs());
    // gamma below (b/tau)(1 - beta): passive by the one-sided reading,
    // active by the debt root. The root wins; the disagreement is surfaced.
    let one_sided_cut = (1.0 - beta) / tau_over_b;
    let note = if stance == Stance::Active && gamma < one_sided_cut - tol::BOUNDARY_BAND {
        Some(format!(
            "gamma={gamma} is below (b/tau)(1-beta)={one_sided_cut:.6}: fiscal policy is active \
             by the debt root |{root:.6}| > 1 though the one-sided condition would call it passive"
        ))
    } else {
        None
    };
    (stance, note)
}

/// New-Keynesian predicate under the strict PLT rule.
///
/// Monetary stance from the sign of `phi_p` (the case analysis reduces to
/// `phi_p > 0` against `phi_p < 0`); fiscal stance from the debt root
/// `(1/beta)(1 - (tau/b) gamma)`. `kappa` does not move the verdict and is
/// accepted only to pin the parameter point being described.
pub fn nk_predicate(
    phi_p: f64,
    gamma: f64,
    beta: f64,
    tau_over_b: f64,
    _kappa: f64,
) -> RegimeVerdict {
    let monetary = if phi_p.abs() <= tol::BOUNDARY_BAND {
        Stance::Boundary
    } else if phi_p > 0.0 {
        Stance::Active
    } else {
        Stance::Passive
    };
    let (fiscal, note) = nk_fiscal_stance(gamma, beta, tau_over_b);
    RegimeVerdict {
        monetary,
        fiscal,
        verdict: pair_verdict(monetary, fiscal),
        note,
    }
}

/// New-Keynesian predicate under the strict IT rule: monetary stance from
/// `phi_pi` against 1, fiscal stance from the debt root.
pub fn nk_predicate_it(phi_pi: f64, gamma: f64, beta: f64, tau_over_b: f64) -> RegimeVerdict {
    let monetary = if (phi_pi - 1.0).abs() <= tol::BOUNDARY_BAND {
        Stance::Boundary
    } else if phi_pi > 1.0 {
        Stance::Active
    } else {
        Stance::Passive
    };
    let (fiscal, note) = nk_fiscal_stance(gamma, beta, tau_over_b);
    RegimeVerdict {
        monetary,
        fiscal,
        verdict: pair_verdict(monetary, fiscal),
        note,
    }
}

/// Outcome of the determinant/trace/minor case analysis for a 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WoodfordCount {
    /// Eigenvalues strictly outside the unit circle.
    pub n_outside: usize,
    /// Which two-outside case held strictly, when one did.
    pub case: Option<u8>,
    /// Some root sits on the unit circle (within `tol::UNIT_CIRCLE`).
    pub boundary: bool,
}

/// Counts roots outside the unit circle from the three scalar summaries of a
/// 3x3 real matrix: determinant, trace, and sum of principal minors.
///
/// The characteristic polynomial is `L^3 - tr L^2 + M L - det`; the three
/// printed case inequality sets each certify exactly two roots outside.
/// When no case holds strictly the count falls back to direct roots of the
/// cubic (via its companion matrix).
pub fn woodford_case(det: f64, trace: f64, minors: f64) -> WoodfordCount {
    let p_one = 1.0 - trace + minors - det;
    let p_minus_one = -1.0 - trace - minors - det;
    let disc = det * det - det * trace + minors - 1.0;

    let case = if p_one < 0.0 && p_minus_one > 0.0 {
        Some(1)
    } else if p_one > 0.0 && p_minus_one < 0.0 && disc > 0.0 {
        Some(2)
    } else if p_one > 0.0 && p_minus_one < 0.0 && disc < 0.0 && trace.abs() > 3.0 {
        Some(3)
    } else {
        None
    };
    if let Some(c) = case {
        return WoodfordCount {
            n_outside: 2,
            case: Some(c),
            boundary: false,
        };
    }

    // A root on the unit circle makes p(1), p(-1), or the circle-pair
    // discriminant vanish; detect that from the polynomial, since clustered
    // unit roots are computed with only O(eps^(1/3)) accuracy.
    let scale = 1.0 + trace.abs() + minors.abs() + det.abs();
    let boundary = p_one.abs() <= 1e-9 * scale
        || p_minus_one.abs() <= 1e-9 * scale
        || disc.abs() <= 1e-9 * scale;

    // No case held strictly: count the roots directly.
    let companion = nalgebra::DMatrix::from_row_slice(
        3,
        3,
        &[trace, -minors, det, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    );
    let roots = companion.complex_eigenvalues();
    let band = if boundary { 1e-4 } else { tol::UNIT_CIRCLE };
    let n_outside = roots.iter().filter(|z| z.norm() > 1.0 + band).count();
    WoodfordCount {
        n_outside,
        case: None,
        boundary,
    }
}

/// Which model a regime map is drawn for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Leeper,
    Nk,
}

/// Cross-validated determinacy map over (policy coefficient, gamma).
#[derive(Debug, Clone, Serialize)]
pub struct RegimeMap {
    pub model: ModelKind,
    pub rule: String,
    /// Name of the swept policy coefficient (`phi_p` or `phi_pi`).
    pub coef_name: String,
    pub coef_axis: Vec<f64>,
    pub gamma_axis: Vec<f64>,
    /// Analytic verdict codes, row-major with the coefficient as the row.
    pub analytic: Vec<String>,
    /// Numerical classifier verdict codes, same layout.
    pub numeric: Vec<String>,
    /// `[coef index, gamma index]` of cells where both sides claim a
    /// verdict (neither is boundary) and the claims differ.
    pub disagreements: Vec<[usize; 2]>,
    /// Cells where either side reports a boundary.
    pub n_boundary: usize,
    pub notes: Vec<String>,
}

impl RegimeMap {
    pub fn n_disagreements(&self) -> usize {
        self.disagreements.len()
    }
}

/// Evaluates both the analytic predicate and the numerical classifier on a
/// grid and flags every off-boundary disagreement.
pub fn sweep(
    model: ModelKind,
    rule: RuleKind,
    params: &ModelParams,
    coef_axis: &[f64],
    gamma_axis: &[f64],
) -> Result<RegimeMap> {
    let mut analytic = Vec::with_capacity(coef_axis.len() * gamma_axis.len());
    let mut numeric = Vec::with_capacity(analytic.capacity());
    let mut disagreements = Vec::new();
    let mut n_boundary = 0usize;
    let mut notes = Vec::new();

    for (ic, &coef) in coef_axis.iter().enumerate() {
        for (ig, &gamma) in gamma_axis.iter().enumerate() {
            let mut p = params.clone();
            p.gamma = gamma;
            match rule {
                RuleKind::Plt => {
                    p.phi_p = coef;
                    p.phi_pi = 0.0;
                    p.delta = 1.0;
                }
                RuleKind::It => {
                    p.phi_pi = coef;
                    p.phi_p = 0.0;
                    p.delta = 0.0;
                }
                RuleKind::General => {
                    return Err(crate::error::Error::UnsupportedRule(
                        "regime maps cover the strict IT and PLT rules".into(),
                    ))
                }
            }
            let a = match (model, rule) {
                (ModelKind::Leeper, RuleKind::Plt) => {
                    leeper_predicate(coef, gamma, p.beta, p.pi_ss)
                }
                (ModelKind::Leeper, RuleKind::It) => {
                    leeper_predicate_it(coef, gamma, p.beta, p.pi_ss)
                }
                (ModelKind::Nk, RuleKind::Plt) => {
                    nk_predicate(coef, gamma, p.beta, p.tau_over_b(), p.kappa)
                }
                (ModelKind::Nk, RuleKind::It) => {
                    nk_predicate_it(coef, gamma, p.beta, p.tau_over_b())
                }
                _ => unreachable!(),
            };
            let system = match model {
                ModelKind::Leeper => build_leeper(&p)?.system,
                ModelKind::Nk => {
                    let rc = make_rule(p.phi_p, p.phi_pi, p.delta, RuleScaling::Log, p.pi_ss);
                    build_nk(&p, &rc)?.system
                }
            };
            let c = classify(&system)?;
            let n_code = if c.is_boundary() {
                MapVerdict::Boundary
            } else {
                MapVerdict::from_classifier(c.verdict)
            };
            if a.verdict != MapVerdict::Boundary
                && n_code != MapVerdict::Boundary
                && a.verdict != n_code
            {
                disagreements.push([ic, ig]);
            }
            if a.verdict == MapVerdict::Boundary || n_code == MapVerdict::Boundary {
                n_boundary += 1;
            }
            if let Some(note) = &a.note {
                if notes.len() < 8 && !notes.contains(note) {
                    notes.push(note.clone());
                }
            }
            analytic.push(a.verdict.code().to_string());
            numeric.push(n_code.code().to_string());
        }
    }

    Ok(RegimeMap {
        model,
        rule: rule.label().to_string(),
        coef_name: match rule {
            RuleKind::Plt => "phi_p".into(),
            _ => "phi_pi".into(),
        },
        coef_axis: coef_axis.to_vec(),
        gamma_axis: gamma_axis.to_vec(),
        analytic,
        numeric,
        disagreements,
        n_boundary,
        notes,
    })
}

/// Evenly spaced grid including both endpoints.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two points");
    let step = (hi - lo) / (n as f64 - 1.0);
    (0..n).map(|i| lo + step * i as f64).collect()
}
