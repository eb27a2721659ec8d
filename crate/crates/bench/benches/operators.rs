use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fockkit::counterexample::{divergence_sum, membership_sums};
use fockkit::nuclear::{lattice_operator, lattice_partition};
use fockkit::toeplitz::{build_from_density, build_toeplitz};
use fockkit::{CounterexampleParams, Exponent, FockParams, MeasureSymbol, Resolution};
use fockkit_bench::{disk, gaussian, scattered_points};

fn builds(c: &mut Criterion) {
    let params = FockParams::hilbert(1.0).unwrap();
    let mut group = c.benchmark_group("build");
    for n in [32usize, 64, 128] {
        group.bench_with_input(BenchmarkId::new("gaussian", n), &n, |b, &n| {
            b.iter(|| build_toeplitz(black_box(&gaussian()), n, &params).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("points_50", n), &n, |b, &n| {
            let mu = scattered_points(50);
            b.iter(|| build_toeplitz(black_box(&mu), n, &params).unwrap())
        });
    }
    let MeasureSymbol::Density(d) = disk() else { unreachable!() };
    group.bench_function("disk_density_64", |b| {
        b.iter(|| build_from_density(black_box(&d), 64, &params, &Resolution::default()).unwrap())
    });
    group.finish();
}

fn schatten(c: &mut Criterion) {
    let params = FockParams::hilbert(1.0).unwrap();
    let mut group = c.benchmark_group("schatten");
    for n in [32usize, 64, 128] {
        let op = build_toeplitz(&scattered_points(50), n, &params).unwrap();
        group.bench_with_input(BenchmarkId::new("s1", n), &op, |b, op| {
            b.iter(|| op.schatten_norm(Exponent::ONE).unwrap())
        });
    }
    group.finish();
}

fn lattice(c: &mut Criterion) {
    let params = FockParams::hilbert(1.0).unwrap();
    let mu = disk();
    let mut group = c.benchmark_group("lattice");
    for r in [0.25, 0.0625] {
        group.bench_with_input(BenchmarkId::new("partition", r), &r, |b, &r| {
            b.iter(|| lattice_partition(black_box(&mu), r).unwrap())
        });
    }
    let part = lattice_partition(&mu, 0.0625).unwrap();
    group.bench_function("operator_64", |b| b.iter(|| lattice_operator(&part, 64, &params).unwrap()));
    group.finish();
}

fn counterexample(c: &mut Criterion) {
    let params = CounterexampleParams::default();
    c.bench_function("counterexample/membership", |b| b.iter(|| membership_sums(black_box(&params)).unwrap()));
    c.bench_function("counterexample/divergence", |b| b.iter(|| divergence_sum(black_box(&params)).unwrap()));
}

criterion_group!(benches, builds, schatten, lattice, counterexample);
criterion_main!(benches);
