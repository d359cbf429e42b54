use criterion::{black_box, criterion_group, criterion_main, Criterion};
use milnor_bench::{context, CUBIC, F1};
use milnor_core::koszulss::SpectralSequence;

fn slices(c: &mut Criterion) {
    let mut g = c.benchmark_group("slice");
    g.sample_size(10);
    for k in [8, 15, 25] {
        g.bench_function(format!("f1/k={k}"), |b| {
            b.iter(|| context(F1).slice(black_box(k)))
        });
    }
    g.finish();
}

fn hilbert(c: &mut Criterion) {
    let mut g = c.benchmark_group("hilbert_row");
    g.sample_size(10);
    g.bench_function("f1/3..20", |b| {
        b.iter(|| context(F1).hilbert_row(3, 20).unwrap())
    });
    g.finish();
}

fn spectral_sequence(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectral_sequence");
    g.sample_size(10);
    g.bench_function("cubic/hi=27", |b| {
        b.iter(|| {
            let ctx = context(CUBIC);
            SpectralSequence::compute(&ctx, 27, 4).unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, slices, hilbert, spectral_sequence);
criterion_main!(benches);
