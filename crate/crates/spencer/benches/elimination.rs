//! Fraction-free rank of a prolonged jet system, rayon versus sequential.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spencer::jet_theory::macaulay_system;
use spencer::par;

fn rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("prolongation_rank");
    group.sample_size(10);
    for r in [2u32, 3] {
        let m = macaulay_system().prolong(r).matrix();
        for (label, on) in [("parallel", true), ("sequential", false)] {
            group.bench_with_input(BenchmarkId::new(label, r + 2), &m, |b, m| {
                par::set_parallel(on);
                b.iter(|| black_box(m.rank()));
            });
        }
    }
    par::set_parallel(true);
    group.finish();
}

criterion_group!(benches, rank);
criterion_main!(benches);
