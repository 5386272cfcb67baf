use std::hint::black_box;

use boson_decay_bench::flat_band;
use boson_decay_core::fock_oracle::FockOracle;
use boson_decay_core::{ExactPropagator, OpenSystemState};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn build(c: &mut Criterion) {
    let mut group = c.benchmark_group("propagator build");
    group.sample_size(10);
    for n in [100, 400, 1000] {
        let (system, bath) = flat_band(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| ExactPropagator::new(black_box(&system), black_box(&bath)).unwrap())
        });
    }
    group.finish();
}

fn coefficients(c: &mut Criterion) {
    let mut group = c.benchmark_group("coefficients at one time");
    for n in [100, 1000] {
        let (system, bath) = flat_band(n);
        let exact = ExactPropagator::new(&system, &bath).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| exact.coefficients(black_box(1.5)))
        });
    }
    group.finish();
}

fn fock_oracle(c: &mut Criterion) {
    let (system, bath) = flat_band(3);
    let oracle = FockOracle::new(&system, &bath, 3).unwrap();
    c.bench_function("fock oracle N=3 n=3", |b| {
        b.iter(|| {
            oracle
                .reduced_state(black_box(&OpenSystemState::Fock(3)), 0.7)
                .unwrap()
        })
    });
}

criterion_group!(benches, build, coefficients, fock_oracle);
criterion_main!(benches);
