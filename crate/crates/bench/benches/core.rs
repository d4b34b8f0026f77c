use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tisparse::spectral::{lowest_eigenpair, Compiled, LanczosConfig, LinearOperator};
use tisparse::{census, ground_energy, sparsify, Boundary, CensusBudget, Method, SpectralConfig};
use tisparse_bench::{heisenberg, hubbard, long_instance};

fn build(c: &mut Criterion) {
    let torus = heisenberg(2, 4, Boundary::Torus, "1");
    c.bench_function("build/heisenberg_torus_4x4", |b| b.iter(|| black_box(&torus).build(1 << 16).unwrap()));
    let fermions = hubbard(3, 4);
    c.bench_function("build/hubbard_3x3_4e", |b| b.iter(|| black_box(&fermions).build(1 << 16).unwrap()));
}

fn matvec(c: &mut Criterion) {
    let op = heisenberg(2, 4, Boundary::Torus, "1").build(1 << 16).unwrap();
    let compiled = Compiled::<f64>::new(&op);
    let x: Vec<f64> = (0..compiled.dim()).map(|i| ((i % 7) as f64) - 3.0).collect();
    let mut y = vec![0.0; compiled.dim()];
    c.bench_function("matvec/heisenberg_torus_4x4", |b| b.iter(|| compiled.apply(black_box(&x), &mut y)));
}

fn eigensolver(c: &mut Criterion) {
    let op = heisenberg(2, 4, Boundary::Torus, "1").build(1 << 16).unwrap();
    let compiled = Compiled::<f64>::new(&op);
    let cfg = LanczosConfig::default();
    let mut group = c.benchmark_group("lanczos");
    group.sample_size(10);
    group.bench_function("heisenberg_torus_4x4", |b| b.iter(|| lowest_eigenpair(&compiled, &cfg).unwrap()));
    group.finish();

    let small = heisenberg(2, 3, Boundary::Open, "1").build(1 << 16).unwrap();
    let mut group = c.benchmark_group("ground_energy_3x3");
    for method in [Method::Dense, Method::Iterative] {
        let cfg = SpectralConfig::default().with_method(method);
        group.bench_function(method.tag(), |b| b.iter(|| ground_energy(black_box(&small), &cfg).unwrap()));
    }
    group.finish();
}

fn reduction(c: &mut Criterion) {
    let inst = long_instance();
    c.bench_function("sparsify/long_coupling", |b| b.iter(|| sparsify(black_box(&inst)).unwrap()));
    c.bench_function("census/n_max_40", |b| b.iter(|| census(black_box(40), CensusBudget::STANDARD)));
}

criterion_group!(benches, build, matvec, eigensolver, reduction);
criterion_main!(benches);
