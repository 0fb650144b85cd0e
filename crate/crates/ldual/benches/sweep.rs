use criterion::{criterion_group, criterion_main, Criterion};

use ldual::sweep::{duality_case, par_map, seq_map, sweep_cases};

fn sweep(c: &mut Criterion) {
    let cases = sweep_cases();
    let mut g = c.benchmark_group("duality_sweep");
    g.sample_size(10);
    g.bench_function("par_map", |b| b.iter(|| par_map(&cases, |(c, lam)| duality_case(c, lam))));
    g.bench_function("seq_map", |b| b.iter(|| seq_map(&cases, |(c, lam)| duality_case(c, lam))));
    g.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
