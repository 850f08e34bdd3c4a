use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qent_core::montecarlo::evaluate_sample;
use qent_core::ppt::classify;
use qent_core::quditmath::{partial_trace, partial_transpose_subset, DensityMatrix};
use qent_core::sampling::{induced_mixed, sample_haar_pure, HaarSampler, KeepPolicy, SeedSpec};

fn mixed(d: usize, n: usize, m: usize) -> DensityMatrix {
    induced_mixed(d, n, m, KeepPolicy::FirstM, SeedSpec::new(1, 0)).unwrap()
}

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("haar_pure");
    for n in [6usize, 10, 14] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let mut i = 0;
            b.iter(|| {
                i += 1;
                sample_haar_pure(2, n, SeedSpec::new(7, i)).unwrap()
            })
        });
    }
    group.finish();
}

fn reduction(c: &mut Criterion) {
    let mut group = c.benchmark_group("partial_trace");
    for (n, m) in [(8usize, 2usize), (12, 4), (14, 6)] {
        let state = sample_haar_pure(2, n, SeedSpec::new(3, 0)).unwrap();
        let keep: Vec<usize> = (0..m).collect();
        group.bench_function(format!("N{n}_m{m}"), |b| {
            b.iter(|| partial_trace(black_box(&state), &keep).unwrap())
        });
    }
    group.finish();
}

fn transpose_and_spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("partial_transpose_spectrum");
    for m in [2usize, 4, 6] {
        let rho = mixed(2, m + 4, m);
        let subset: Vec<usize> = (0..m / 2).collect();
        group.bench_with_input(BenchmarkId::from_parameter(m), &rho, |b, rho| {
            b.iter(|| {
                let t = partial_transpose_subset(black_box(rho), &subset).unwrap();
                qent_core::quditmath::hermitian_spectrum(&t).unwrap()
            })
        });
    }
    group.finish();
}

fn classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    group.sample_size(20);
    for m in [2usize, 4, 6] {
        let rho = mixed(2, 2 * m + 2, m);
        group.bench_with_input(BenchmarkId::from_parameter(m), &rho, |b, rho| {
            b.iter(|| classify(black_box(rho)).unwrap())
        });
    }
    group.finish();
}

fn full_sample(c: &mut Criterion) {
    let sampler = HaarSampler::default();
    let mut group = c.benchmark_group("evaluate_sample");
    group.sample_size(20);
    for (n, m) in [(6usize, 2usize), (9, 3), (14, 6)] {
        group.bench_function(format!("N{n}_m{m}"), |b| {
            let mut i = 0;
            b.iter(|| {
                i += 1;
                evaluate_sample(&sampler, 2, n, m, KeepPolicy::FirstM, SeedSpec::new(11, i))
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    sampling,
    reduction,
    transpose_and_spectrum,
    classification,
    full_sample
);
criterion_main!(benches);
