use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use reebmult::homology::{self, BaseManifold};
use reebmult::index::{self, FastPath, PathModel};
use reebmult::rational::ratio;

fn path() -> PathModel {
    PathModel::certified(
        1,
        vec![ratio(1_414_213_562_373, 1_000_000_000_000), ratio(-7_071, 10_000)],
        vec![2],
        9_999,
    )
    .unwrap()
}

fn cz(c: &mut Criterion) {
    let p = path();
    let fast = FastPath::new(&p).unwrap();
    let mut group = c.benchmark_group("cz_index");
    for last in [100_u64, 1_000, 9_999] {
        group.throughput(Throughput::Elements(last));
        group.bench_with_input(BenchmarkId::new("exact", last), &last, |b, &last| {
            b.iter(|| (1..=last).map(|k| index::cz_index(&p, k).unwrap()).sum::<i64>());
        });
        group.bench_with_input(BenchmarkId::new("word", last), &last, |b, &last| {
            b.iter(|| (1..=last as i64).map(|k| fast.cz(k)).sum::<i64>());
        });
        group.bench_with_input(BenchmarkId::new("sequence", last), &last, |b, &last| {
            b.iter(|| fast.sequence(last).map(|(_, mu)| mu).sum::<i64>());
        });
    }
    group.finish();
}

fn homology_sums(c: &mut Criterion) {
    let base = BaseManifold::complex_projective(3);
    let mut group = c.benchmark_group("homology");
    group.bench_function("hc_rank/0..10000", |b| {
        b.iter(|| (0..10_000).map(|m| homology::hc_rank(&base, m)).sum::<u64>());
    });
    group.bench_function("alternating_sum/1e9", |b| {
        b.iter(|| homology::alternating_sum(&base, black_box(-50), black_box(1_000_000_000)));
    });
    group.finish();
}

criterion_group!(benches, cz, homology_sums);
criterion_main!(benches);
