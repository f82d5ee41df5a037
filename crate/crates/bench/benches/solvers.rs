use criterion::{black_box, criterion_group, criterion_main, Criterion};
use fsosec_core::montecarlo::estimate_sop;
use fsosec_core::optimize::{adaptive_optimal, fixed_optimal, fixed_oracle, re_threshold, SolverOptions};
use fsosec_core::secrecy::sop;
use fsosec_core::{CdfModel, Scenario, SimConfig};

fn solvers(c: &mut Criterion) {
    let sc = Scenario::baseline();
    let opts = SolverOptions::default();
    let mut g = c.benchmark_group("optimize");
    g.bench_function("sop", |b| b.iter(|| sop(&sc, black_box(1.3))));
    g.bench_function("re_threshold", |b| b.iter(|| re_threshold(&sc, black_box(0.4), &opts)));
    g.bench_function("adaptive_optimal", |b| b.iter(|| adaptive_optimal(&sc, black_box(4.0), 0.4, &opts)));
    g.bench_function("fixed_optimal", |b| b.iter(|| fixed_optimal(&sc, black_box(1.0), &opts)));
    g.sample_size(10);
    g.bench_function("fixed_oracle_exact", |b| b.iter(|| fixed_oracle(&sc, black_box(1.0), CdfModel::Exact, &opts)));
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let sc = Scenario::baseline();
    let sim = SimConfig::new(100_000, 7);
    let mut g = c.benchmark_group("montecarlo");
    g.sample_size(10);
    g.bench_function("estimate_sop_1e5", |b| b.iter(|| estimate_sop(&sc, black_box(1.0), &sim)));
    g.finish();
}

criterion_group!(benches, solvers, monte_carlo);
criterion_main!(benches);
