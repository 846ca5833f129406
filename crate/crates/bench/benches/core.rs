use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use invset_bench::{pair, subshifts};
use invset_core::filter::{construct_thm_1, ThmParams};
use invset_core::gfun::construct_thm_1_2;
use invset_core::rational::{pow2, rat};
use invset_core::sampler::{absorption_estimate, simulate, Driver, Start};
use invset_core::spectral::{phi_hat, sum_phi_hat};
use invset_core::symbolic::rho_to_set;
use invset_core::{SymbolSeq, TransitionFn};

fn distance(c: &mut Criterion) {
    let mut group = c.benchmark_group("rho_to_set");
    for (name, k) in subshifts() {
        let j = k.alphabet_bound();
        let x = SymbolSeq::new(vec![0, 1, j], vec![1, 1, 0, 0, 1, 0], j).expect("valid");
        group.bench_with_input(BenchmarkId::from_parameter(name), &x, |b, x| b.iter(|| rho_to_set(black_box(x), &k)));
    }
    group.finish();
}

fn products(c: &mut Criterion) {
    let haar = TransitionFn::builtin("haar").expect("builtin");
    c.bench_function("phi_hat haar t=48", |b| b.iter(|| phi_hat(&haar, black_box(&rat(7, 3)), 48)));
    c.bench_function("sum_phi_hat haar k=512", |b| b.iter(|| sum_phi_hat(&haar, black_box(&rat(1, 3)), 512, 48)));
}

fn sampling(c: &mut Criterion) {
    let haar = TransitionFn::builtin("haar").expect("builtin");
    c.bench_function("simulate haar 2000 steps", |b| {
        b.iter(|| simulate(Driver::Filter(&haar), &Start::Point(rat(1, 3)), 2000, 7, 0))
    });
    let eps = pow2(-20);
    c.bench_function("absorption 100 paths x 2000 steps", |b| {
        b.iter(|| absorption_estimate(&haar, &rat(1, 3), 100, 2000, &eps, 7))
    });
}

fn constructions(c: &mut Criterion) {
    let b = pair();
    c.bench_function("log-modulus filter for {1/3, 2/3}", |bench| {
        bench.iter(|| construct_thm_1(black_box(&b), &ThmParams::default()))
    });
    let mut group = c.benchmark_group("g construction");
    for (name, k) in subshifts() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &k, |b, k| b.iter(|| construct_thm_1_2(k)));
    }
    group.finish();
}

criterion_group!(benches, distance, products, sampling, constructions);
criterion_main!(benches);
