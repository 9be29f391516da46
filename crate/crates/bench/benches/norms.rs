use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use regrates::builtin::ExampleId;
use regrates::{distance, interp_norm, triple_norm};

fn bench_norms(c: &mut Criterion) {
    let mut g = c.benchmark_group("norms");
    for n in [10_000usize, 100_000] {
        let x = ExampleId::DiagExample { n }.build().unwrap().element;
        g.bench_with_input(BenchmarkId::new("triple_norm", n), &x, |b, x| {
            b.iter(|| triple_norm(black_box(x), 1.0).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("interp_norm", n), &x, |b, x| {
            b.iter(|| interp_norm(black_box(x), 0.5, 1.0).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("distance", n), &x, |b, x| {
            b.iter(|| distance(black_box(x), 1.0, 1.0).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_norms);
criterion_main!(benches);
