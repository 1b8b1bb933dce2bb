use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use entrywise_core::oracle::{sample, verify_det_factorization, verify_power_expansion};
use entrywise_core::pencil::witness_value;
use entrywise_core::rational::ratio;
use entrywise_core::schur::{schur_bialternant, schur_jacobi_trudi};
use entrywise_core::threshold::{cube_bounds, threshold_constant};
use entrywise_core::{CoeffVector, Partition, RatMatrix, Rational, ThresholdQuery};

fn thresholds(c: &mut Criterion) {
    let mut g = c.benchmark_group("threshold_constant");
    for n in [3usize, 10, 30, 100] {
        let q =
            ThresholdQuery::for_coeffs(CoeffVector::ones(n), n as u64 + 2, Rational::from_integer(1.into())).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &q, |b, q| {
            b.iter(|| threshold_constant(black_box(q)))
        });
    }
    g.finish();
    c.bench_function("cube_bounds/n=50,M=2", |b| {
        let ones = CoeffVector::ones(50);
        let rho = Rational::from_integer(1.into());
        b.iter(|| cube_bounds(black_box(&ones), 2, &rho).unwrap())
    });
}

fn schur(c: &mut Criterion) {
    let lam = Partition::new(vec![5, 3, 2, 1]).unwrap();
    let x: Vec<Rational> = (1..=5).map(|k| ratio(k, k + 1)).collect();
    let mut g = c.benchmark_group("schur");
    g.bench_function("bialternant", |b| {
        b.iter(|| schur_bialternant(black_box(&lam), black_box(&x)))
    });
    g.bench_function("jacobi_trudi", |b| {
        b.iter(|| schur_jacobi_trudi(black_box(&lam), black_box(&x)))
    });
    g.finish();
}

fn identities(c: &mut Criterion) {
    let mut rng = sample::rng(1);
    let u = sample::rational_vec(&mut rng, 4, 6, 5);
    let v = sample::rational_vec(&mut rng, 4, 6, 5);
    let cv = sample::coeffs(&mut rng, 4);
    c.bench_function("det_factorization/n=4,M=7", |b| {
        b.iter(|| verify_det_factorization(black_box(&u), black_box(&v), &cv, 7, 2).unwrap())
    });
    let a = RatMatrix::from_fn(5, |i, j| ratio((i * j + 1) as i64, (i + j + 1) as i64));
    c.bench_function("power_expansion/n=5,M=9", |b| {
        b.iter(|| verify_power_expansion(black_box(&a), 9).unwrap())
    });
    let ones = CoeffVector::ones(3);
    let rho = Rational::from_integer(1.into());
    c.bench_function("witness_value/t=1e-6", |b| {
        let t = ratio(1, 1_000_000);
        b.iter(|| witness_value(&ones, 3, &rho, black_box(&t)).unwrap())
    });
}

criterion_group!(benches, thresholds, schur, identities);
criterion_main!(benches);
