use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use regrates::builtin::ExampleId;
use regrates::noisy::{noisy_sweep, ChoiceRule, NoiseStrategy};
use regrates::{delta_rate, tikhonov_rate};

fn bench_rates(c: &mut Criterion) {
    let mut g = c.benchmark_group("rates");
    g.sample_size(10);
    for n in [10_000usize, 100_000] {
        let p = ExampleId::DiagExample { n }.build().unwrap();
        g.bench_with_input(BenchmarkId::new("tikhonov_rate", n), &p.element, |b, x| {
            b.iter(|| tikhonov_rate(black_box(x), 0.5, 1).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("delta_rate", n), &p.element, |b, x| {
            b.iter(|| delta_rate(black_box(x), 1.0, 0.0, 1.0, None).unwrap())
        });
        let rule = ChoiceRule::LandweberDiscrepancy {
            tau: 1.5,
            sigma: 1.0,
            nu: 1.0,
        };
        let deltas = [1e-1, 1e-2, 1e-3, 1e-4];
        g.bench_with_input(BenchmarkId::new("landweber_discrepancy_sweep", n), &p, |b, p| {
            b.iter(|| noisy_sweep(black_box(p), &deltas, rule, NoiseStrategy::WorstAligned).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_rates);
criterion_main!(benches);
