use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hspan_core::realnum::{
    exp_enclosure, harmonic_span_asymptotic, harmonic_span_enclosure, ln_enclosure,
};
use hspan_core::{brute_force_f, f_bounds, solve_f, validate_query, PrecisionPolicy};

fn solver(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_f");
    for (m, q, r) in [
        (5i64, 1i64, 1i64),
        (23, 2, 3),
        (100_000, 1, 1),
        (1_000_000_000, 1, 1),
    ] {
        let query = validate_query(m, q, r).unwrap();
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{m}-{q}-{r}")),
            &query,
            |b, q| b.iter(|| solve_f(black_box(q), &PrecisionPolicy::default()).unwrap()),
        );
    }
    g.finish();
}

fn bounds(c: &mut Criterion) {
    let query = validate_query(3, 3, 3).unwrap();
    c.bench_function("f_bounds/3-3-3", |b| {
        b.iter(|| f_bounds(black_box(&query)).unwrap())
    });
}

fn enclosures(c: &mut Criterion) {
    let mut g = c.benchmark_group("enclosure");
    for bits in [64u32, 256, 1024] {
        g.bench_with_input(BenchmarkId::new("exp9", bits), &bits, |b, &bits| {
            b.iter(|| exp_enclosure(black_box(9), bits))
        });
        g.bench_with_input(BenchmarkId::new("ln", bits), &bits, |b, &bits| {
            b.iter(|| ln_enclosure(black_box(2_718_281_828), 1_000_000_000, bits).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("direct_10k", bits), &bits, |b, &bits| {
            b.iter(|| harmonic_span_enclosure(black_box(1000), 11_000, bits).unwrap())
        });
        g.bench_with_input(
            BenchmarkId::new("asymptotic_1e9", bits),
            &bits,
            |b, &bits| {
                b.iter(|| {
                    harmonic_span_asymptotic(black_box(1_000_000_000), 2_718_281_827, bits).unwrap()
                })
            },
        );
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let query = validate_query(1000, 1, 1).unwrap();
    c.bench_function("brute_force_f/1000-1-1", |b| {
        b.iter(|| brute_force_f(black_box(&query), 10_000).unwrap())
    });
}

criterion_group!(benches, solver, bounds, enclosures, oracle);
criterion_main!(benches);
