use criterion::{criterion_group, criterion_main, Criterion};
use qpswf::concentration::band_limit;
use qpswf::prolate::{eig_prolate_1d, eig_prolate_grid};
use qpswf::qft::{forward_qft_dual, inverse_qft};
use qpswf::rng::random_signal;
use qpswf::GridAxis;
use std::hint::black_box;

fn transforms(c: &mut Criterion) {
    let ax = GridAxis::symmetric(4.0, 257).unwrap();
    let f = random_signal(ax, ax, 1);
    let s = forward_qft_dual(&f).unwrap();
    c.bench_function("qft_forward_257", |b| {
        b.iter(|| forward_qft_dual(black_box(&f)).unwrap())
    });
    c.bench_function("qft_inverse_257", |b| {
        b.iter(|| inverse_qft(black_box(&s), ax, ax).unwrap())
    });
    c.bench_function("band_limit_257", |b| b.iter(|| band_limit(black_box(&f), 4.0).unwrap()));
}

fn eigensolvers(c: &mut Criterion) {
    let mut g = c.benchmark_group("eig");
    g.sample_size(10);
    g.bench_function("gauss_c4_n256", |b| {
        b.iter(|| eig_prolate_1d(1.0, black_box(4.0), 256, 36).unwrap())
    });
    g.bench_function("gauss_c24_n256", |b| {
        b.iter(|| eig_prolate_1d(1.0, black_box(24.0), 256, 36).unwrap())
    });
    let ax = GridAxis::symmetric(4.0, 257).unwrap();
    g.bench_function("grid_c2_n257", |b| {
        b.iter(|| eig_prolate_grid(&ax, 1.0, black_box(2.0), 16).unwrap())
    });
    g.finish();
}

criterion_group!(benches, transforms, eigensolvers);
criterion_main!(benches);
