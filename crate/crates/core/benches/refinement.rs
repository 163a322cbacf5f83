use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lexsym_core::graph::{lex_product, Graph};
use lexsym_core::par::Exec;
use lexsym_core::sweep::{sweep, SweepOptions};
use lexsym_core::wl::stable_partition_with;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn products() -> Vec<(String, Graph)> {
    let petersen = Graph::from_edges(
        10,
        [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 0),
            (0, 5),
            (1, 6),
            (2, 7),
            (3, 8),
            (4, 9),
            (5, 7),
            (7, 9),
            (9, 6),
            (6, 8),
            (8, 5),
        ],
    )
    .unwrap();
    vec![
        (
            "C6[P4]".into(),
            lex_product(&Graph::cycle(6), &Graph::path(4)).unwrap(),
        ),
        (
            "Petersen[P3]".into(),
            lex_product(&petersen, &Graph::path(3)).unwrap(),
        ),
        (
            "P8[C6]".into(),
            lex_product(&Graph::path(8), &Graph::cycle(6)).unwrap(),
        ),
    ]
}

fn bench_refinement(c: &mut Criterion) {
    let mut group = c.benchmark_group("stable_partition");
    group.sample_size(10);
    for (name, g) in products() {
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, &name), &g, |b, g| {
                b.iter(|| stable_partition_with(black_box(g), exec))
            });
        }
    }
    group.finish();
}

fn bench_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (mode, exec) in MODES {
        let mut opts = SweepOptions::new(4, 3);
        opts.exec = exec;
        group.bench_function(BenchmarkId::new(mode, "4x3"), |b| {
            b.iter(|| sweep(black_box(&opts)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_refinement, bench_sweep);
criterion_main!(benches);
