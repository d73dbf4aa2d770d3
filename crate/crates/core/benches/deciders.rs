use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use isoforest::exec::{decide_all, Execution};
use isoforest::treegen::{isomorphic_copy, random_recursive_tree, TreeRng};
use isoforest::{Algorithm, Tree};

fn iso_pair(n: usize, seed: u64) -> (Tree, Tree) {
    let mut rng = TreeRng::seed_from(seed);
    let t = random_recursive_tree(n, &mut rng).unwrap();
    let copy = isomorphic_copy(&t, &mut rng);
    (t, copy)
}

fn single_pair(c: &mut Criterion) {
    let mut group = c.benchmark_group("iso_pair");
    group.sample_size(20);
    for n in [1_000usize, 10_000, 100_000] {
        let (t, copy) = iso_pair(n, n as u64);
        group.throughput(Throughput::Elements(n as u64));
        for algo in [Algorithm::Primes, Algorithm::Ideal, Algorithm::Original] {
            group.bench_with_input(BenchmarkId::new(algo.name(), n), &n, |b, _| {
                b.iter(|| algo.decide(black_box(&t), black_box(&copy)))
            });
        }
    }
    group.finish();
}

fn batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("batch");
    group.sample_size(10);
    let pairs: Vec<(Tree, Tree)> = (0..64).map(|i| iso_pair(5_000, i)).collect();
    group.throughput(Throughput::Elements(pairs.len() as u64));
    for (label, exec) in [
        ("sequential", Execution::Sequential),
        ("parallel", Execution::Parallel),
    ] {
        for algo in [Algorithm::Primes, Algorithm::Original] {
            group.bench_function(BenchmarkId::new(label, algo.name()), |b| {
                b.iter(|| decide_all(exec, algo, black_box(&pairs)))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, single_pair, batch);
criterion_main!(benches);
