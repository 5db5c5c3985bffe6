use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use moment_forge::local::b_p;
use moment_forge::predictor::staggered_shifts;
use moment_forge::special::{gamma_mp, hardy_z, zeta};
use moment_forge::PrecisionContext;
use num_complex::Complex64;

fn special(c: &mut Criterion) {
    let s = Complex64::new(0.5, 14.1);
    c.bench_function("zeta(1/2+14.1i)", |b| b.iter(|| zeta(black_box(s))));
    c.bench_function("hardy_z(1e5)", |b| b.iter(|| hardy_z(black_box(1e5))));
    let ctx = PrecisionContext::EXTENDED;
    let z = ctx.complex(0.25, 0.0);
    c.bench_function("gamma_mp(1/4), 60 digits", |b| b.iter(|| gamma_mp(black_box(&z), &ctx)));
}

fn local(c: &mut Criterion) {
    let ctx = PrecisionContext::EXTENDED;
    let (a, b) = staggered_shifts(3, 1e-3);
    c.bench_function("b_p(97), K=3", |bch| bch.iter(|| b_p(black_box(97), &a, &b, &ctx)));
}

criterion_group!(benches, special, local);
criterion_main!(benches);
