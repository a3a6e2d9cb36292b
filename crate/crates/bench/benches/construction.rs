use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use kappa_weyl::{spectrum, verify, AlgebraParams, FockBasis, OperatorSet, UnitarityPolicy};

fn basis_benchmark(c: &mut Criterion) {
    c.bench_function("enumerate d=4 n_max=8", |b| {
        b.iter(|| FockBasis::enumerate(black_box(4), black_box(8)).unwrap())
    });
}

fn operator_benchmark(c: &mut Criterion) {
    let params = AlgebraParams::new(2.0, 3).unwrap();
    let basis = FockBasis::enumerate(3, 8).unwrap();
    c.bench_function("operator set d=3 n_max=8", |b| {
        b.iter(|| OperatorSet::build(&params, black_box(&basis), UnitarityPolicy::Strict).unwrap())
    });
    c.bench_function("hamiltonian d=3 n_max=8", |b| {
        b.iter(|| spectrum::hamiltonian(&params, black_box(&basis), UnitarityPolicy::Strict).unwrap())
    });
}

fn catalogue_benchmark(c: &mut Criterion) {
    let params = AlgebraParams::new(2.0, 3).unwrap();
    let basis = FockBasis::enumerate(3, 6).unwrap();
    let margins = BTreeMap::new();
    c.bench_function("relation catalogue d=3 n_max=6", |b| {
        b.iter(|| verify::check_catalogue(&params, black_box(&basis), 1e-10, &margins).unwrap())
    });
}

criterion_group!(benches, basis_benchmark, operator_benchmark, catalogue_benchmark);
criterion_main!(benches);
