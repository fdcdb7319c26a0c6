use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use maxclass::session::{Session, SessionConfig};
use maxclass::skeleton::{build_skeleton, BuildOptions};

fn builds(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_skeleton");
    group.sample_size(10);
    for (p, n, min_gal) in [(7, 11, 1), (7, 12, 1), (11, 20, 5)] {
        let session = Session::new(SessionConfig::new(p, n, n - (2 * p as u32 - 8))).unwrap();
        let depth = session.skeleton_depth();
        let label = format!("S_{p}({n}) min_gal {min_gal}");
        let opts = BuildOptions::restricted(depth, min_gal);
        group.bench_with_input(BenchmarkId::new("parallel", &label), &opts, |b, &o| {
            b.iter(|| build_skeleton(black_box(&session), o).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", &label), &opts.sequential(), |b, &o| {
            b.iter(|| build_skeleton(black_box(&session), o).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, builds);
criterion_main!(benches);
