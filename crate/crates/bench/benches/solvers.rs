//! Benchmarks for the hot paths: the Jacobi eigensolver at the cutoffs
//! the sweeps actually use, the variational solve with its perturbation
//! series, and a full single sweep point combining all methods.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rabi_core::harness::{run_sweep, Axis, Method, Observable, SweepSpec};
use rabi_core::model::{build_h_z, ModelParams, TruncationConfig};
use rabi_core::{exact, gvm};

fn params() -> ModelParams {
    ModelParams::new(1.0, 1.5, 0.6).unwrap()
}

fn bench_eigensolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigensolve_symmetric");
    group.sample_size(10);
    for n_max in [30usize, 60] {
        let cutoff = TruncationConfig::with_n_max(n_max).unwrap();
        let h = build_h_z(&params(), &cutoff);
        group.bench_with_input(BenchmarkId::from_parameter(2 * n_max), &h, |b, h| {
            b.iter(|| exact::eigensolve_symmetric(h, 1e-12).unwrap())
        });
    }
    group.finish();
}

fn bench_ground_state(c: &mut Criterion) {
    let cutoff = TruncationConfig::with_n_max(60).unwrap();
    let mut group = c.benchmark_group("ground_state");
    group.sample_size(10);
    group.bench_function("n_max_60_with_doubling", |b| {
        b.iter(|| exact::ground_state(&params(), &cutoff).unwrap())
    });
    group.finish();
}

fn bench_gvm_solve(c: &mut Criterion) {
    c.bench_function("gvm_solve_full", |b| {
        b.iter(|| gvm::solve(&params(), gvm::ROOT_TOL, gvm::SERIES_TOL).unwrap())
    });
    c.bench_function("gvm_mean_photon_full", |b| {
        let solution = gvm::solve(&params(), gvm::ROOT_TOL, gvm::SERIES_TOL).unwrap();
        b.iter(|| gvm::mean_photon_full(&solution))
    });
}

fn bench_sweep_point(c: &mut Criterion) {
    let cutoff = TruncationConfig::with_n_max(60).unwrap();
    // Smallest legal sweep: two grid points, every method, NS included.
    let spec = SweepSpec {
        axis: Axis::Omega,
        start: 1.0,
        stop: 1.5,
        count: 2,
        fixed: 0.6,
        methods: vec![Method::Ns, Method::GvmClosed, Method::GvmFull, Method::Grwa],
        observable: Observable::Energy,
        omega: 1.0,
    };
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("two_points_all_methods", |b| {
        b.iter(|| run_sweep(&spec, &cutoff).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_eigensolve,
    bench_ground_state,
    bench_gvm_solve,
    bench_sweep_point
);
criterion_main!(benches);
