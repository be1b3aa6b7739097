use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use betacone::divergence::BetaParam;
use betacone::dual::{dual_certificate, dual_component};
use betacone::solvers::{multiplicative_step, pdhg_tv, PdhgConfig};
use betacone_bench::tomo_fixture;

fn bench_projector(c: &mut Criterion) {
    let (a, _, mu) = tomo_fixture(64);
    c.bench_function("radon_apply_64", |b| {
        b.iter(|| black_box(a.apply(black_box(&mu)).unwrap()))
    });
    let lambda = vec![1.0; a.n_rows()];
    c.bench_function("radon_adjoint_64", |b| {
        b.iter(|| black_box(a.adjoint(black_box(&lambda)).unwrap()))
    });
}

fn bench_multiplicative(c: &mut Criterion) {
    let (a, y, mu0) = tomo_fixture(64);
    for beta in [1.0, 1.2, 2.0] {
        let bp = BetaParam::new(beta).unwrap();
        c.bench_function(&format!("multiplicative_step_64_beta_{beta}"), |b| {
            b.iter_batched(
                || mu0.clone(),
                |mu| black_box(multiplicative_step(&mu, &y, &a, bp).unwrap()),
                BatchSize::SmallInput,
            )
        });
    }
}

fn bench_dual(c: &mut Criterion) {
    let bp = BetaParam::new(1.3).unwrap();
    c.bench_function("dual_component_fractional", |b| {
        b.iter(|| black_box(dual_component(black_box(1.7), black_box(-0.4), bp).unwrap()))
    });
    let (a, y, mu0) = tomo_fixture(32);
    c.bench_function("dual_certificate_32", |b| {
        b.iter(|| black_box(dual_certificate(&mu0, &y, &a, bp).unwrap()))
    });
}

fn bench_pdhg(c: &mut Criterion) {
    let (a, y, _) = tomo_fixture(32);
    let config = PdhgConfig::balanced(&a, 0.1, 50).unwrap();
    c.bench_function("pdhg_tv_32_x50", |b| {
        b.iter(|| black_box(pdhg_tv(&y, &a, &config).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_projector,
    bench_multiplicative,
    bench_dual,
    bench_pdhg
);
criterion_main!(benches);
