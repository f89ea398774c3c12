use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qplane_core::catalog::log_xy;
use qplane_core::koszul::{build, homology_dims, spectrum_scan, DEFAULT_RANK_TOL};
use qplane_core::linalg::eigenvalues;
use qplane_core::opcalc::{calc, model_pair};
use qplane_core::{Axis, Complex64, ScanGrid};
use std::hint::black_box;

fn functional_calculus(c: &mut Criterion) {
    let q = Complex64::new(0.5, 0.0);
    let mut group = c.benchmark_group("calc_eig");
    for n in [16, 32, 64] {
        let p = model_pair(q, n).unwrap();
        let f = log_xy(q, n).unwrap();
        group.bench_with_input(BenchmarkId::new("calc", n), &n, |b, _| {
            b.iter(|| calc(black_box(&f), &p).unwrap())
        });
        let a = calc(&f, &p).unwrap();
        group.bench_with_input(BenchmarkId::new("eigenvalues", n), &n, |b, _| {
            b.iter(|| eigenvalues(black_box(&a)).unwrap())
        });
    }
    group.finish();
}

fn koszul(c: &mut Criterion) {
    let q = Complex64::new(0.5, 0.0);
    let p = model_pair(q, 16).unwrap();
    c.bench_function("homology/16", |b| {
        b.iter(|| {
            homology_dims(
                &build(&p, Complex64::new(0.0, 0.3), Complex64::new(0.0, 0.0)).unwrap(),
                DEFAULT_RANK_TOL,
            )
        })
    });
    let grid = ScanGrid {
        re_min: -1.5,
        re_max: 1.5,
        re_steps: 16,
        im_min: -1.5,
        im_max: 1.5,
        im_steps: 16,
    };
    c.bench_function("scan/16x16", |b| {
        b.iter(|| spectrum_scan(&p, Axis::Y, black_box(&grid), DEFAULT_RANK_TOL).unwrap())
    });
}

criterion_group!(benches, functional_calculus, koszul);
criterion_main!(benches);
