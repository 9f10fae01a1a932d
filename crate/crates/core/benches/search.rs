use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ramseylab::corpus;
use ramseylab::entropy::entropy_theorem_suite;
use ramseylab::par::{Exec, SearchOptions};
use ramseylab::ramsey::{arrow_check, ArrowKind};
use ramseylab::structures::{StructCategory, StructClass, Structure};

fn policies() -> [(&'static str, SearchOptions); 2] {
    let par = SearchOptions {
        exec: Exec::Parallel,
        ..SearchOptions::default()
    };
    [("sequential", SearchOptions::sequential()), ("parallel", par)]
}

fn arrow(c: &mut Criterion) {
    let class = StructClass::Linord;
    let cat = StructCategory::new(class, (2..=6).map(|n| Structure::chain(class, n)).collect()).unwrap();
    let mut group = c.benchmark_group("arrow 6 -> (3)^2_2");
    for (name, base) in policies() {
        for prune in [true, false] {
            let opts = SearchOptions { prune_aut: prune, ..base };
            let label = if prune { "orbit-pruned" } else { "full" };
            group.bench_with_input(BenchmarkId::new(name, label), &opts, |b, o| {
                b.iter(|| arrow_check(&cat, 4, 1, 0, 2, 1, ArrowKind::Structural, black_box(o)).unwrap())
            });
        }
    }
    group.finish();
}

fn theorem_suite(c: &mut Criterion) {
    let corpus = corpus::named_owned();
    let pairs = corpus::product_pairs(&corpus, 9);
    let star = corpus::small_categories(&corpus, 2);
    let mut group = c.benchmark_group("entropy theorem suite");
    group.sample_size(10);
    for (name, opts) in policies() {
        group.bench_function(name, |b| {
            b.iter(|| entropy_theorem_suite(&corpus, &pairs, &star, 3, black_box(&opts)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, arrow, theorem_suite);
criterion_main!(benches);
