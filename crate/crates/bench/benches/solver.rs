use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mfplt_core::determinacy::{linspace, sweep, ModelKind};
use mfplt_core::model::{build_leeper, build_nk, make_rule, ModelParams, RuleKind, RuleScaling};
use mfplt_core::simulate::{
    irf, natural_zlb_bound, welfare_loss, zlb_irf, ShockKind, ShockSpec, SolvedModel,
};
use mfplt_core::solver::{classify, solve};

fn leeper_params() -> ModelParams {
    ModelParams {
        phi_p: -0.1,
        phi_pi: 0.0,
        delta: 1.0,
        gamma: 0.0,
        ..ModelParams::default()
    }
}

fn nk_solved(phi_p: f64, phi_pi: f64, delta: f64, gamma: f64) -> SolvedModel {
    let p = ModelParams {
        phi_p,
        phi_pi,
        delta,
        gamma,
        ..ModelParams::default()
    };
    let rule = make_rule(phi_p, phi_pi, delta, RuleScaling::Log, p.pi_ss);
    SolvedModel::from_nk_params(&p, &rule).unwrap()
}

fn bench_classify(c: &mut Criterion) {
    let leeper = build_leeper(&leeper_params()).unwrap().system;
    let p = ModelParams {
        phi_p: 1.2,
        delta: 1.0,
        gamma: 0.2,
        ..ModelParams::default()
    };
    let nk = build_nk(&p, &make_rule(1.2, 0.0, 1.0, RuleScaling::Log, 1.0))
        .unwrap()
        .system;
    c.bench_function("classify_leeper_3x3", |b| {
        b.iter(|| classify(black_box(&leeper)).unwrap())
    });
    c.bench_function("classify_nk_4x4", |b| {
        b.iter(|| classify(black_box(&nk)).unwrap())
    });
}

fn bench_solve(c: &mut Criterion) {
    let leeper = build_leeper(&leeper_params()).unwrap().system;
    c.bench_function("solve_leeper_fiscally_led", |b| {
        b.iter(|| solve(black_box(&leeper)).unwrap())
    });
}

fn bench_irf(c: &mut Criterion) {
    let solved = nk_solved(-0.1, 0.0, 1.0, 0.0);
    let shock = ShockSpec::new(ShockKind::Demand, -0.01, 0.5);
    c.bench_function("irf_nk_40_periods", |b| {
        b.iter(|| irf(black_box(&solved), &shock, 40).unwrap())
    });
    c.bench_function("welfare_nk_500_periods", |b| {
        let p = ModelParams::default();
        b.iter(|| {
            let series = irf(black_box(&solved), &shock, 500).unwrap();
            welfare_loss(&series, &p.weights, p.beta).unwrap()
        })
    });
}

fn bench_zlb(c: &mut Criterion) {
    let solved = nk_solved(0.0, 1.2, 0.0, 0.2);
    let shock = ShockSpec::new(ShockKind::Demand, -0.04, 0.5);
    let bound = natural_zlb_bound(&ModelParams::default());
    c.bench_function("zlb_guess_and_verify", |b| {
        b.iter(|| zlb_irf(black_box(&solved), &shock, 40, bound).unwrap())
    });
}

fn bench_map(c: &mut Criterion) {
    let params = ModelParams::default();
    let coef = linspace(-2.0, 2.0, 50);
    let gammas = linspace(0.0, 2.2, 50);
    c.bench_function("regime_map_leeper_50x50", |b| {
        b.iter(|| sweep(ModelKind::Leeper, RuleKind::Plt, &params, &coef, &gammas).unwrap())
    });
}

criterion_group!(
    benches,
    bench_classify,
    bench_solve,
    bench_irf,
    bench_zlb,
    bench_map
);
criterion_main!(benches);
