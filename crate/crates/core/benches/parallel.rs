use std::hint::black_box;

use convert_bw::bounds::{audit_grid, SweepGrid};
use convert_bw::convertible::SplitParams;
use convert_bw::entropy::{rs_ensemble, verify_grid, VerifyConfig};
use convert_bw::search::{audit_all, min_bandwidth_exhaustive, SearchBudget};
use convert_bw::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn bench_sweep(c: &mut Criterion) {
    let grid = SweepGrid {
        lfs: (2..=5).collect(),
        kfs: (1..=8).collect(),
        rfs: (1..=8).collect(),
        ris: None,
        alphas: (1..=4).collect(),
    };
    let mut group = c.benchmark_group("bound_sweep");
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(audit_grid(&grid, exec)))
        });
    }
    group.finish();
}

fn bench_search(c: &mut Criterion) {
    let p = SplitParams::new(2, 2, 1, 1, 2).unwrap().with_field(5).unwrap();
    let ens = rs_ensemble(p).unwrap();
    let budget = SearchBudget::default();
    let mut group = c.benchmark_group("scheme_search");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::new("minimum", name), |b| {
            b.iter(|| black_box(min_bandwidth_exhaustive(&ens, &budget, exec).unwrap().min_read))
        });
        group.bench_function(BenchmarkId::new("audit", name), |b| {
            b.iter(|| black_box(audit_all(&ens, budget.max_visits, exec).unwrap().feasible))
        });
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let cfg = VerifyConfig {
        qs: vec![7],
        lfs: vec![2, 3],
        trials: 100,
        ..VerifyConfig::default()
    };
    let mut group = c.benchmark_group("oracle_grid");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(verify_grid(&cfg, exec).reports.len()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweep, bench_search, bench_oracle);
criterion_main!(benches);
