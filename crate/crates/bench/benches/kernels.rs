use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use netblow_bench::{bump, grid_network};
use netblow_core::{first_eigenpair, integrate, laplacian, Nonlinearity, SolveConfig};

fn bench_laplacian(c: &mut Criterion) {
    let mut group = c.benchmark_group("laplacian");
    for side in [6, 12, 20] {
        let net = grid_network(side);
        let u = bump(&net, 1.0);
        group.bench_with_input(BenchmarkId::from_parameter(net.len()), &u, |b, u| {
            b.iter(|| laplacian(black_box(&net), black_box(u)).unwrap())
        });
    }
    group.finish();
}

fn bench_eigenpair(c: &mut Criterion) {
    let mut group = c.benchmark_group("first_eigenpair");
    for side in [5, 8, 11] {
        let net = grid_network(side);
        group.bench_function(BenchmarkId::from_parameter(net.interior().len()), |b| {
            b.iter(|| first_eigenpair(black_box(&net)).unwrap())
        });
    }
    group.finish();
}

fn bench_integrate(c: &mut Criterion) {
    let mut group = c.benchmark_group("integrate");
    let net = grid_network(8);
    let cfg = SolveConfig {
        t_end: 1.0,
        record_every: 0.1,
        ..SolveConfig::default()
    };
    let decay = Nonlinearity::linear(0.5).unwrap();
    let u0 = bump(&net, 1.0);
    group.bench_function("linear_decay", |b| {
        b.iter(|| integrate(&net, &decay, black_box(&u0), &cfg).unwrap())
    });
    let blowup = Nonlinearity::power(2.0).unwrap();
    let big = bump(&net, 50.0);
    group.bench_function("power2_blowup", |b| {
        b.iter(|| integrate(&net, &blowup, black_box(&big), &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_laplacian, bench_eigenpair, bench_integrate);
criterion_main!(benches);
