use criterion::{criterion_group, criterion_main, Criterion};
use harrop_core::batch;
use harrop_core::random::{random_prop_case, random_proved_sequent, rng, PropParams};

fn solving(c: &mut Criterion) {
    let sequents: Vec<_> = (0..2000u64).filter_map(|s| random_proved_sequent(&mut rng(s), 6)).take(400).collect();
    let mut g = c.benchmark_group("solve_all");
    g.bench_function("sequential", |b| b.iter(|| batch::solve_all_sequential(&sequents, 8)));
    g.bench_function("batch", |b| b.iter(|| batch::solve_all(&sequents, 8)));
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let cases: Vec<_> = (0..200u64).map(|s| random_prop_case(&mut rng(s), PropParams::default())).collect();
    let mut g = c.benchmark_group("oracle_all");
    g.sample_size(20);
    g.bench_function("sequential", |b| b.iter(|| batch::oracle_all_sequential(&cases, 7, 3)));
    g.bench_function("batch", |b| b.iter(|| batch::oracle_all(&cases, 7, 3)));
    g.finish();
}

criterion_group!(benches, solving, oracle);
criterion_main!(benches);
