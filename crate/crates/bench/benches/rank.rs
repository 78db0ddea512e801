use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dgcalc_bench::rank_input;
use dgcalc_core::{rank, Field};

fn bench_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    group.sample_size(10);
    for p in [2, 3] {
        let field = Field::new(p).expect("prime");
        for n in [256, 1024, 4096] {
            let m = rank_input(field, n, 8, 7);
            group.bench_with_input(BenchmarkId::new(format!("gf{p}"), n), &m, |b, m| b.iter(|| rank(m)));
        }
    }
    group.finish();
}

criterion_group!(benches, bench_rank);
criterion_main!(benches);
