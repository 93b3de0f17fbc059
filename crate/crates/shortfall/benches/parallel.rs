//! Parallel-versus-sequential throughput of the Monte-Carlo harness.
//!
//! Run with `cargo bench` (the `parallel` feature is on by default). Both
//! executions produce byte-identical results; only wall time differs.

use criterion::{criterion_group, criterion_main, Criterion};

use shortfall::model::HeavyTailModel;
use shortfall::risk::RiskSpec;
use shortfall::simulation::{
    run_expansion_compare, run_expansion_compare_seq, run_mse_sweep, run_mse_sweep_seq,
    ExpansionCompareConfig, MseSweepConfig,
};

fn mse_config() -> MseSweepConfig {
    let model = HeavyTailModel::burr(0.2, -2.0).unwrap();
    MseSweepConfig {
        spec: RiskSpec::gen_expectile(model, 0.95, 0.95).unwrap(),
        n: 300,
        replications: 100,
        tau: None,
        k_lo: 6,
        k_hi: 200,
        k_step: 2,
        master_seed: 7,
    }
}

fn expansion_config() -> ExpansionCompareConfig {
    let model = HeavyTailModel::gpd(1.0 / 3.0, 1.0).unwrap();
    ExpansionCompareConfig {
        spec: RiskSpec::gen_expectile(model, 0.95, 0.95).unwrap(),
        taus: Vec::new(),
    }
}

fn bench_mse_sweep(c: &mut Criterion) {
    let config = mse_config();
    let mut group = c.benchmark_group("mse_sweep");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| run_mse_sweep(&config).unwrap()));
    group.bench_function("sequential", |b| b.iter(|| run_mse_sweep_seq(&config).unwrap()));
    group.finish();
}

fn bench_expansion_compare(c: &mut Criterion) {
    let config = expansion_config();
    let mut group = c.benchmark_group("expansion_compare");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| run_expansion_compare(&config).unwrap()));
    group.bench_function("sequential", |b| {
        b.iter(|| run_expansion_compare_seq(&config).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_mse_sweep, bench_expansion_compare);
criterion_main!(benches);
