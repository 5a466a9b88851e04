use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use pswf::approx::{ConstantSource, EvalOptions, Evaluator, RegimePartition};
use pswf::eigensystem::{eigenvalue_oracle, ModeIndex, Truncation};
use pswf::maps::{alpha_of_sigma, zeta};
use pswf::oracle::Oracle;
use pswf::specfun::{bessel_i_scaled, bessel_j, pcf};

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernels");
    g.bench_function("pcf a=-40 t=6", |b| b.iter(|| pcf(black_box(-40.0), black_box(6.0)).unwrap()));
    g.bench_function("pcf a=-40 t=14", |b| b.iter(|| pcf(black_box(-40.0), black_box(14.0)).unwrap()));
    g.bench_function("bessel_j m=3 x=25", |b| b.iter(|| bessel_j(3, black_box(25.0)).unwrap()));
    g.bench_function("bessel_i_scaled m=2 x=40", |b| b.iter(|| bessel_i_scaled(2, black_box(40.0)).unwrap()));
    let a = alpha_of_sigma(0.4).unwrap();
    g.bench_function("zeta x=0.7 sigma=0.4", |b| b.iter(|| zeta(black_box(0.7), 0.4, a).unwrap()));
    g.finish();
}

fn eigen(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigenvalue");
    for gamma in [20.0, 100.0] {
        let mode = ModeIndex::new(1, 5).unwrap();
        g.bench_with_input(BenchmarkId::new("sturm", gamma), &gamma, |b, &gm| {
            b.iter(|| eigenvalue_oracle(mode, gm, Truncation::Auto).unwrap())
        });
    }
    g.finish();
}

fn evaluator(c: &mut Criterion) {
    let mode = ModeIndex::new(0, 4).unwrap();
    let part = RegimePartition::default();
    let opts = EvalOptions { source: ConstantSource::Asymptotic, ..EvalOptions::default() };
    let mut g = c.benchmark_group("evaluator");
    g.sample_size(20);
    g.bench_function("build asymptotic gamma=60", |b| b.iter(|| Evaluator::new(mode, 60.0, part, opts).unwrap()));
    let ev = Evaluator::new(mode, 60.0, part, opts).unwrap();
    g.bench_function("angular 64 points", |b| {
        b.iter(|| (0..64).map(|i| ev.evaluate_angular(-0.99 + 1.98 * i as f64 / 63.0).unwrap().value).sum::<f64>())
    });
    g.bench_function("radial 64 points", |b| {
        b.iter(|| (0..64).map(|i| ev.evaluate_radial(1.01 + 4.0 * i as f64 / 63.0).unwrap().value).sum::<f64>())
    });
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mode = ModeIndex::new(0, 4).unwrap();
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("build gamma=60 x_max=1", |b| b.iter(|| Oracle::new(mode, 60.0, 1.0).unwrap()));
    let o = Oracle::new(mode, 60.0, 3.0).unwrap();
    g.bench_function("angular series x=0.5", |b| b.iter(|| o.angular(black_box(0.5)).unwrap()));
    g.bench_function("radial series x=2", |b| b.iter(|| o.radial(black_box(2.0)).unwrap()));
    g.finish();
}

criterion_group!(benches, kernels, eigen, evaluator, oracle);
criterion_main!(benches);
