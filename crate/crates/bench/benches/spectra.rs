use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use specshift_core::oracle::oracle_block_eigenvalues;
use specshift_core::shiftdiag::build_disk_eigenvector_adaptive;
use specshift_core::spectrum::{closed_form_spectrum, point_spectrum};
use specshift_core::{Complex64, Kind, WeightSequence};

fn spectra(c: &mut Criterion) {
    let w = WeightSequence::geometric(1.5).unwrap();
    let mut g = c.benchmark_group("point_spectrum");
    for k_max in [50, 100, 200] {
        g.bench_with_input(BenchmarkId::from_parameter(k_max), &k_max, |b, &k| {
            b.iter(|| point_spectrum(Kind::Sym, black_box(&w), k, 1e-12).unwrap())
        });
    }
    g.finish();

    c.bench_function("closed_form/200", |b| {
        b.iter(|| closed_form_spectrum(black_box(1.5), Kind::Asym, 200).unwrap())
    });

    c.bench_function("oracle_block/k=40", |b| {
        b.iter(|| oracle_block_eigenvalues(Kind::Sym, 40, black_box(&w), 1e-12).unwrap())
    });
}

fn disk(c: &mut Criterion) {
    let alpha = WeightSequence::bergman();
    let mu = WeightSequence::constant(1.0);
    let lambda = Complex64::from_polar(0.3, 1.0);
    c.bench_function("disk_certificate/bergman", |b| {
        b.iter(|| build_disk_eigenvector_adaptive(black_box(lambda), &alpha, &mu, 1e-10, 400).unwrap())
    });
}

criterion_group!(benches, spectra, disk);
criterion_main!(benches);
