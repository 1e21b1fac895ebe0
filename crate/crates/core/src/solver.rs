//! Blanchard-Kahn eigen-decoupling solver.
//!
//! Works on any [`LinearReModel`] in the canonical form
//! `E_t X_{t+1} = A X_t + B e_t` with jump variables listed first.
//! Classification counts eigenvalues of `A` outside the unit circle against
//! the number of jump variables. When the counts agree the solver decouples
//! the system with the left eigenvectors of the unstable roots, solves each
//! unstable direction forward against the closed-form conditional
//! expectations of the AR(1)/quasi-differenced shocks, and reads the state
//! transition off the realized predetermined rows.
//!
//! The resulting [`Solution`] is a state-space policy: with `s` the
//! endogenous states (current-dated) and `w` the exogenous state stacking
//! `(level, lagged level)` per shock,
//!
//! ```text
//! jumps_t = F_s s_{t-1} + F_w w_t
//! s_t     = T_s s_{t-1} + R_w w_t
//! w_t     = P w_{t-1} + Q eta_t
//! ```

use nalgebra::{Complex, DMatrix, Schur};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{LinearReModel, ShockProcess};
use crate::tol;

/// Determinacy verdict from the unstable-root count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Unstable roots equal jump variables: unique stable solution.
    Determinate,
    /// Fewer unstable roots than jumps: a continuum of stable solutions.
    Indeterminate,
    /// More unstable roots than jumps: no stable solution.
    NoStableSolution,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Determinate => "Determinate",
            Verdict::Indeterminate => "Indeterminate",
            Verdict::NoStableSolution => "NoStableSolution",
        }
    }
}

fn serialize_complex_vec<S: serde::Serializer>(
    v: &[Complex<f64>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&serde_json::json!({
            "re": z.re,
            "im": z.im,
            "modulus": z.norm(),
        }))?;
    }
    seq.end()
}

/// Eigenvalue evidence behind a verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    /// Eigenvalues sorted by modulus, ascending.
    #[serde(serialize_with = "serialize_complex_vec")]
    pub eigenvalues: Vec<Complex<f64>>,
    /// Count with modulus above `1 + tol::UNIT_CIRCLE`.
    pub n_unstable: usize,
    /// Count with modulus within `tol::UNIT_CIRCLE` of the unit circle;
    /// such knife-edge systems are flagged rather than silently classified.
    pub n_boundary: usize,
    pub n_jumps: usize,
}

impl Classification {
    pub fn is_boundary(&self) -> bool {
        self.n_boundary > 0
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.norm()).collect()
    }
}

/// Classifies a model by its unstable-root count.
pub fn classify(model: &LinearReModel) -> Result<Classification> {
    model.validate()?;
    let eigenvalues = eigenvalues_sorted(&model.a)?;
    let n_unstable = eigenvalues
        .iter()
        .filter(|z| z.norm() > 1.0 + tol::UNIT_CIRCLE)
        .count();
    let n_boundary = eigenvalues
        .iter()
        .filter(|z| (z.norm() - 1.0).abs() <= tol::UNIT_CIRCLE)
        .count();
    let n_jumps = model.n_jumps();
    let verdict = match n_unstable.cmp(&n_jumps) {
        std::cmp::Ordering::Equal => Verdict::Determinate,
        std::cmp::Ordering::Less => Verdict::Indeterminate,
        std::cmp::Ordering::Greater => Verdict::NoStableSolution,
    };
    Ok(Classification {
        verdict,
        eigenvalues,
        n_unstable,
        n_boundary,
        n_jumps,
    })
}

fn eigenvalues_sorted(a: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| Error::EigenFailure("Schur iteration did not converge".into()))?;
    let mut eigenvalues: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|x, y| {
        (x.norm(), x.re, x.im)
            .partial_cmp(&(y.norm(), y.re, y.im))
            .unwrap()
    });
    Ok(eigenvalues)
}

/// State-space policy function of a determinate model.
#[derive(Debug, Clone)]
pub struct Solution {
    pub jump_names: Vec<String>,
    /// Endogenous state names, current-dated.
    pub state_names: Vec<String>,
    pub shock_names: Vec<String>,
    /// Jump loading on lagged endogenous states.
    pub f_s: DMatrix<f64>,
    /// Jump loading on the exogenous state; columns are `(level, lagged
    /// level)` per shock, in shock order.
    pub f_w: DMatrix<f64>,
    /// Endogenous state transition.
    pub t_s: DMatrix<f64>,
    /// Endogenous state loading on the exogenous state.
    pub r_w: DMatrix<f64>,
    /// Exogenous state transition (block companion per shock).
    pub exo_p: DMatrix<f64>,
    /// Innovation loading of the exogenous state.
    pub exo_q: DMatrix<f64>,
    pub shocks: Vec<ShockProcess>,
    pub eigenvalues: Vec<Complex<f64>>,
}

impl Solution {
    /// Transition matrix over the predetermined states.
    pub fn t(&self) -> &DMatrix<f64> {
        &self.t_s
    }

    /// Impact of unit innovations on the states at the impact period.
    pub fn r(&self) -> DMatrix<f64> {
        &self.r_w * &self.exo_q
    }

    /// Impact of unit innovations on the jump variables.
    pub fn jump_impact(&self) -> DMatrix<f64> {
        &self.f_w * &self.exo_q
    }

    pub fn n_states(&self) -> usize {
        self.t_s.nrows()
    }

    pub fn n_jumps(&self) -> usize {
        self.f_s.nrows()
    }

    /// Columns of `f_w` / `r_w` holding the level and lagged level of the
    /// named shock.
    pub fn shock_columns(&self, name: &str) -> Option<(usize, usize)> {
        let j = self.shock_names.iter().position(|s| s == name)?;
        Some((2 * j, 2 * j + 1))
    }
}

/// Solves a determinate model by spectral decoupling.
pub fn solve(model: &LinearReModel) -> Result<Solution> {
    let classification = classify(model)?;
    if classification.is_boundary() {
        return Err(Error::NotDeterminate {
            verdict: "Boundary (unit-modulus root)",
            n_unstable: classification.n_unstable,
            n_jumps: classification.n_jumps,
        });
    }
    if classification.verdict != Verdict::Determinate {
        return Err(Error::NotDeterminate {
            verdict: classification.verdict.label(),
            n_unstable: classification.n_unstable,
            n_jumps: classification.n_jumps,
        });
    }

    let n = model.dim();
    let n_jumps = model.n_jumps();
    let n_states = model.n_predetermined;
    let n_shocks = model.shocks.len();

    let unstable: Vec<Complex<f64>> = classification
        .eigenvalues
        .iter()
        .filter(|z| z.norm() > 1.0 + tol::UNIT_CIRCLE)
        .copied()
        .collect();

    // Left eigenvectors of the unstable roots: rows w with w A = lambda w,
    // obtained from the null spaces of (A^T - lambda I), clustered so a
    // repeated root draws an orthonormal basis of its eigenspace.
    let a_c = model.a.map(|x| Complex::new(x, 0.0));
    let a_t = a_c.transpose();
    let w_rows = left_eigenvectors(&a_t, &unstable)?;

    let mut w = DMatrix::<Complex<f64>>::zeros(n_jumps, n);
    for (i, row) in w_rows.iter().enumerate() {
        w.row_mut(i).copy_from(row);
    }
    let w_y = w.view((0, 0), (n_jumps, n_jumps)).into_owned();
    let w_s = w.view((0, n_jumps), (n_jumps, n_states)).into_owned();

    // Condition of the jump-restriction block; near-singular means the
    // unstable directions barely involve the jumps and no policy exists.
    let svd = w_y.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 0.0 || smax / smin > tol::COND_LIMIT {
        return Err(Error::NearDefective {
            cond: if smin > 0.0 {
                smax / smin
            } else {
                f64::INFINITY
            },
        });
    }

    // Forward-sum restrictions on the exogenous state. For an unstable root
    // d and a shock with persistence rho entering as lev_t - delta*lev_{t-1},
    //   sum_{k>=0} d^{-(k+1)} E_t e_{t+k}
    //     = (d - delta)/(d (d - rho)) * lev_t  -  delta/d * lev_{t-1}.
    let w_b = &w * model.b.map(|x| Complex::new(x, 0.0));
    let n_w = 2 * n_shocks;
    let mut theta = DMatrix::<Complex<f64>>::zeros(n_jumps, n_w);
    for i in 0..n_jumps {
        let d = unstable[i];
        for (j, sp) in model.shocks.iter().enumerate() {
            let load = w_b[(i, j)];
            let level =
                (d - Complex::new(sp.quasi_diff, 0.0)) / (d * (d - Complex::new(sp.rho, 0.0)));
            theta[(i, 2 * j)] -= load * level;
            theta[(i, 2 * j + 1)] += load * Complex::new(sp.quasi_diff, 0.0) / d;
        }
    }

    let lu = w_y.lu();
    let f_s_c = lu.solve(&(-&w_s)).ok_or(Error::NearDefective {
        cond: f64::INFINITY,
    })?;
    let f_w_c = lu.solve(&theta).ok_or(Error::NearDefective {
        cond: f64::INFINITY,
    })?;

    let f_s = cast_real(&f_s_c)?;
    let f_w = cast_real(&f_w_c)?;

    // Realized predetermined rows give the state transition.
    let a_sy = model.a.view((n_jumps, 0), (n_states, n_jumps)).into_owned();
    let a_ss = model
        .a
        .view((n_jumps, n_jumps), (n_states, n_states))
        .into_owned();
    let b_s = model
        .b
        .view((n_jumps, 0), (n_states, n_shocks))
        .into_owned();

    // e_t = Sel w_t maps the stacked (level, lag) pairs to the values in B.
    let mut sel = DMatrix::<f64>::zeros(n_shocks, n_w);
    let mut exo_p = DMatrix::<f64>::zeros(n_w, n_w);
    let mut exo_q = DMatrix::<f64>::zeros(n_w, n_shocks);
    for (j, sp) in model.shocks.iter().enumerate() {
        sel[(j, 2 * j)] = 1.0;
        sel[(j, 2 * j + 1)] = -sp.quasi_diff;
        exo_p[(2 * j, 2 * j)] = sp.rho;
        exo_p[(2 * j + 1, 2 * j)] = 1.0;
        exo_q[(2 * j, j)] = 1.0;
    }

    let t_s = &a_sy * &f_s + a_ss;
    let r_w = &a_sy * &f_w + b_s * sel;

    Ok(Solution {
        jump_names: model.jump_names().to_vec(),
        state_names: model.state_names(),
        shock_names: model.shock_names.clone(),
        f_s,
        f_w,
        t_s,
        r_w,
        exo_p,
        exo_q,
        shocks: model.shocks.clone(),
        eigenvalues: classification.eigenvalues,
    })
}

/// Null-space rows of `(A^T - lambda I)` for each requested eigenvalue.
fn left_eigenvectors(
    a_t: &DMatrix<Complex<f64>>,
    roots: &[Complex<f64>],
) -> Result<Vec<nalgebra::RowDVector<Complex<f64>>>> {
    let n = a_t.nrows();
    let scale = a_t.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let cluster_tol = 1e-8;

    // Group coincident roots so each cluster takes as many null directions
    // as its multiplicity.
    let mut used = vec![false; roots.len()];
    let mut rows: Vec<(usize, nalgebra::RowDVector<Complex<f64>>)> = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![i];
        used[i] = true;
        for j in (i + 1)..roots.len() {
            if !used[j] && (roots[j] - roots[i]).norm() <= cluster_tol * (1.0 + roots[i].norm()) {
                members.push(j);
                used[j] = true;
            }
        }
        let m = members.len();
        let shifted = a_t - DMatrix::<Complex<f64>>::identity(n, n) * roots[i];
        let svd = shifted.svd(false, true);
        let v_t = svd
            .v_t
            .ok_or_else(|| Error::EigenFailure("SVD of shifted matrix failed".into()))?;
        // Singular values are sorted descending; the m smallest must vanish
        // or the root is defective and forward decoupling is unavailable.
        let sv = &svd.singular_values;
        for k in 0..m {
            let sigma = sv[n - 1 - k];
            if sigma > 1e-8 * scale {
                return Err(Error::NearDefective {
                    cond: scale / sigma.max(f64::MIN_POSITIVE),
                });
            }
        }
        for (k, &root_idx) in members.iter().enumerate() {
            // Row k from the bottom of V^H, conjugated, is a null column of
            // the shifted matrix read as a row vector.
            let row = v_t.row(n - 1 - k).conjugate().into_owned();
            rows.push((root_idx, row));
        }
    }
    rows.sort_by_key(|(idx, _)| *idx);
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}

fn cast_real(m: &DMatrix<Complex<f64>>) -> Result<DMatrix<f64>> {
    let max_re = m.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let max_im = m.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if max_im > tol::REALNESS * (1.0 + max_re) {
        return Err(Error::ComplexResidue { max_imag: max_im });
    }
    Ok(m.map(|z| z.re))
}

/// Worst expectational residual of `E_t X_{t+1} = A X_t + B e_t` at a given
/// lagged state and exogenous state, under the solution's policies.
pub fn expectational_residual(
    model: &LinearReModel,
    sol: &Solution,
    s_lag: &nalgebra::DVector<f64>,
    w: &nalgebra::DVector<f64>,
) -> f64 {
    let n_jumps = model.n_jumps();
    let n_shocks = model.shocks.len();
    let jumps = &sol.f_s * s_lag + &sol.f_w * w;
    let s_new = &sol.t_s * s_lag + &sol.r_w * w;
    let w_next = &sol.exo_p * w;
    let jumps_next = &sol.f_s * &s_new + &sol.f_w * &w_next;

    let mut x = nalgebra::DVector::<f64>::zeros(model.dim());
    x.rows_mut(0, n_jumps).copy_from(&jumps);
    x.rows_mut(n_jumps, model.n_predetermined).copy_from(s_lag);
    let mut e = nalgebra::DVector::<f64>::zeros(n_shocks);
    for (j, sp) in model.shocks.iter().enumerate() {
        e[j] = w[2 * j] - sp.quasi_diff * w[2 * j + 1];
    }
    let mut x_next = nalgebra::DVector::<f64>::zeros(model.dim());
    x_next.rows_mut(0, n_jumps).copy_from(&jumps_next);
    x_next
        .rows_mut(n_jumps, model.n_predetermined)
        .copy_from(&s_new);

    let resid = &x_next - (&model.a * &x + &model.b * &e);
    resid.amax()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_leeper, ModelParams};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn leeper_plt(phi_p: f64, gamma: f64) -> ModelParams {
        ModelParams {
            phi_p,
            phi_pi: 0.0,
            delta: 1.0,
            gamma,
            ..ModelParams::default()
        }
    }

    #[test]
    fn classify_matches_regime_taxonomy() {
        // Active monetary / passive fiscal.
        let m = build_leeper(&leeper_plt(1.2, 0.2)).unwrap();
        assert_eq!(classify(&m.system).unwrap().verdict, Verdict::Determinate);
        // Both active: no stable solution.
        let m = build_leeper(&leeper_plt(0.5, 0.0)).unwrap();
        assert_eq!(
            classify(&m.system).unwrap().verdict,
            Verdict::NoStableSolution
        );
        // Both passive: indeterminate.
        let m = build_leeper(&leeper_plt(-0.5, 0.2)).unwrap();
        assert_eq!(classify(&m.system).unwrap().verdict, Verdict::Indeterminate);
    }

    #[test]
    fn classify_ignores_shock_units() {
        let m = build_leeper(&leeper_plt(1.2, 0.2)).unwrap();
        let base = classify(&m.system).unwrap();
        let mut scaled = m.system.clone();
        scaled.b *= 1e6;
        let rescaled = classify(&scaled).unwrap();
        assert_eq!(base.verdict, rescaled.verdict);
        assert_eq!(base.n_unstable, rescaled.n_unstable);
    }

    #[test]
    fn solve_rejects_non_determinate() {
        let m = build_leeper(&leeper_plt(0.5, 0.0)).unwrap();
        assert!(matches!(
            solve(&m.system),
            Err(Error::NotDeterminate { .. })
        ));
    }

    #[test]
    fn zero_shock_loading_gives_zero_impact() {
        let m = build_leeper(&leeper_plt(1.2, 0.2)).unwrap();
        let mut quiet = m.system.clone();
        quiet.b *= 0.0;
        let sol = solve(&quiet).unwrap();
        assert_eq!(sol.r().amax(), 0.0);
        assert_eq!(sol.jump_impact().amax(), 0.0);
        assert_eq!(sol.f_w.amax(), 0.0);
    }

    #[test]
    fn solution_states_are_stable() {
        let m = build_leeper(&leeper_plt(-0.1, 0.0)).unwrap();
        let sol = solve(&m.system).unwrap();
        for z in sol.t_s.clone().complex_eigenvalues().iter() {
            assert!(z.norm() < 1.0 + tol::UNIT_CIRCLE);
        }
    }

    #[test]
    fn expectational_residuals_vanish_on_random_probes() {
        let mut rng = StdRng::seed_from_u64(11);
        for &(phi_p, gamma) in &[(1.2, 0.2), (-0.1, 0.0)] {
            let m = build_leeper(&leeper_plt(phi_p, gamma)).unwrap();
            let sol = solve(&m.system).unwrap();
            for _ in 0..50 {
                let s = DVector::from_fn(sol.n_states(), |_, _| rng.gen_range(-1.0..1.0));
                let w = DVector::from_fn(sol.exo_p.nrows(), |_, _| rng.gen_range(-1.0..1.0));
                assert!(expectational_residual(&m.system, &sol, &s, &w) < 1e-8);
            }
        }
    }

    #[test]
    fn boundary_root_is_flagged_not_classified() {
        // phi_p = 0 under PLT puts a root exactly on the unit circle.
        let m = build_leeper(&leeper_plt(0.0, 0.2)).unwrap();
        let c = classify(&m.system).unwrap();
        assert!(c.is_boundary());
        assert!(matches!(
            solve(&m.system),
            Err(Error::NotDeterminate { verdict, .. }) if verdict.contains("Boundary")
        ));
    }

    #[test]
    fn eigenvalues_reported_sorted_by_modulus() {
        let m = build_leeper(&leeper_plt(1.2, 0.2)).unwrap();
        let c = classify(&m.system).unwrap();
        let moduli = c.moduli();
        assert!(moduli.windows(2).all(|w| w[0] <= w[1] + 1e-14));
        assert_abs_diff_eq!(moduli[2], 1.0 + 0.99 * 1.2, epsilon = 1e-10);
    }
}
