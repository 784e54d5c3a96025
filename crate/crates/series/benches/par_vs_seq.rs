use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unorm_padic::exec::Exec;
use unorm_padic::{Padic, UnramifiedField};
use unorm_series::ops::{gamma_with, phi_with};
use unorm_series::TruncatedSeries;

fn random_series(k: &std::sync::Arc<UnramifiedField>, n: usize, seed: u64) -> TruncatedSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = (0..=n).map(|_| k.from_i64(rng.gen_range(-10_000..10_000))).collect();
    TruncatedSeries::bounded(k, c, 0, 0).unwrap()
}

fn bench(c: &mut Criterion) {
    let k = UnramifiedField::with_degree(5, 2, 20).unwrap();
    let mut group = c.benchmark_group("series");
    group.sample_size(10);
    for &n in &[100usize, 300] {
        let f = random_series(&k, n, 1);
        let g = random_series(&k, n, 2);
        let u = Padic::exact(5, 6);
        for (name, exec) in [("seq", Exec::Seq), ("par", Exec::Par)] {
            group.bench_with_input(BenchmarkId::new(format!("mul/{name}"), n), &n, |b, _| {
                b.iter(|| f.mul_with(&g, exec))
            });
            group.bench_with_input(BenchmarkId::new(format!("phi/{name}"), n), &n, |b, _| {
                b.iter(|| phi_with(&f, usize::MAX, exec))
            });
            group.bench_with_input(BenchmarkId::new(format!("gamma/{name}"), n), &n, |b, _| {
                b.iter(|| gamma_with(&f, &u, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
