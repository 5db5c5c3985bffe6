use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use moment_forge::empirical::{sixth_moment_mean, zeta_sixth_integral};
use moment_forge::identities::{run_suite, Suite};
use moment_forge::predictor::{staggered_shifts, SwapSum};
use moment_forge::PrecisionContext;

fn family(c: &mut Criterion) {
    let mut g = c.benchmark_group("family");
    g.sample_size(10);
    g.bench_function("sixth_moment_mean(1009)", |b| {
        b.iter(|| sixth_moment_mean(black_box(1009)))
    });
    g.bench_function("zeta_sixth_integral(1e4)", |b| {
        b.iter(|| zeta_sixth_integral(black_box(1e4)))
    });
    g.finish();
}

fn predictor(c: &mut Criterion) {
    let mut g = c.benchmark_group("predictor");
    g.sample_size(10);
    let ctx = PrecisionContext::EXTENDED;
    let (a, b) = staggered_shifts(3, 1e-3);
    g.bench_function("SwapSum K=3, cutoff 1e4", |bch| {
        bch.iter(|| SwapSum::new(&a, &b, black_box(10_000), &ctx))
    });
    let ss = SwapSum::new(&a, &b, 10_000, &ctx).unwrap();
    g.bench_function("SwapSum::total(q=1009)", |bch| {
        bch.iter(|| ss.total(black_box(1009), 0.0))
    });
    g.finish();
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    let ctx = PrecisionContext::STANDARD;
    for s in [Suite::Young, Suite::Convolution, Suite::Chk1] {
        g.bench_function(s.name(), |b| b.iter(|| run_suite(s, 1, None, &ctx)));
    }
    g.finish();
}

criterion_group!(benches, family, predictor, suites);
criterion_main!(benches);
