use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ncjet::{Mat, Rat};

fn sample(n: usize, seed: i64) -> Mat {
    Mat::from_fn(n, n, |r, c| {
        let x = (r as i64 * 31 + c as i64 * 17 + seed) % 11 - 5;
        Rat::new(x, 1 + (r + c) as i64 % 4)
    })
}

fn products(c: &mut Criterion) {
    let mut group = c.benchmark_group("mul");
    for n in [16, 48, 96] {
        let (a, b) = (sample(n, 1), sample(n, 2));
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |bench, _| bench.iter(|| black_box(&a).mul_seq(black_box(&b))));
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |bench, _| bench.iter(|| black_box(&a).mul_par(black_box(&b))));
    }
    group.finish();
}

fn reduction(c: &mut Criterion) {
    let mut group = c.benchmark_group("rref");
    for n in [16, 32] {
        let a = sample(n, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| bench.iter(|| black_box(&a).rref()));
    }
    group.finish();
}

fn quantization(c: &mut Criterion) {
    use ncjet::demo::quaternion_demo;
    c.bench_function("quaternion demo", |bench| bench.iter(|| quaternion_demo(false).unwrap().pass()));
}

criterion_group!(benches, products, reduction, quantization);
criterion_main!(benches);
