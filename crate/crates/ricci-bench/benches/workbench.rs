//! Benchmarks for the hot paths: curvature evaluation, variation assembly,
//! classification and a full Newton solve.

use criterion::{criterion_group, criterion_main, Criterion};
use ricci_core::catalog;
use ricci_core::curvature::ricci;
use ricci_core::invertibility::classify;
use ricci_core::solver::{solve_prp, SolveOptions};
use ricci_core::space::Geometry;
use ricci_core::variation::variation_operator;
use std::hint::black_box;

fn bench_ricci(c: &mut Criterion) {
    let mut group = c.benchmark_group("ricci");
    for name in ["berger", "s7s5", "so5-left"] {
        let entry = catalog::load(name).unwrap();
        let mp = entry.sample_metrics(2).remove(1);
        group.bench_function(name, |b| {
            b.iter(|| black_box(ricci(&entry.geometry, black_box(&mp)).scal))
        });
    }
    group.finish();
}

fn bench_variation(c: &mut Criterion) {
    let mut group = c.benchmark_group("variation-matrix");
    for name in ["s5s5", "s7s5", "so5-left"] {
        let entry = catalog::load(name).unwrap();
        let mp = entry.sample_metrics(2).remove(1);
        group.bench_function(name, |b| {
            b.iter(|| {
                black_box(
                    variation_operator(&entry.geometry, black_box(&mp))
                        .matrix
                        .norm(),
                )
            })
        });
    }
    group.finish();
}

fn bench_classify(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    for name in ["berger", "s5s5"] {
        let entry = catalog::load(name).unwrap();
        let mp = entry.sample_metrics(1).remove(0);
        group.bench_function(name, |b| {
            b.iter(|| black_box(classify(&entry.geometry, black_box(&mp)).kernel_dim))
        });
    }
    group.finish();
}

fn bench_solve(c: &mut Criterion) {
    let entry = catalog::load("berger").unwrap();
    let geom = &entry.geometry;
    let truth = entry.metric_from_params(&[1.0, 0.7]).unwrap();
    let target = ricci(geom, &truth).ric_bar;
    let start = entry.metric_from_params(&[1.0, 0.62]).unwrap();
    c.bench_function("solve/berger-round-trip", |b| {
        b.iter(|| {
            let sol = solve_prp(
                geom,
                &target,
                &start,
                truth.det_rel,
                &SolveOptions::default(),
            )
            .unwrap();
            black_box(sol.c)
        })
    });
}

fn bench_load(c: &mut Criterion) {
    c.bench_function("load/s7s5-geometry", |b| {
        b.iter(|| {
            let entry = catalog::load("s7s5").unwrap();
            black_box(entry.geometry.m())
        })
    });
    let spec = catalog::load("so5-left").unwrap().geometry.spec;
    c.bench_function("load/so5-commutant", |b| {
        b.iter(|| {
            let geom = Geometry::new(spec.clone()).unwrap();
            black_box(geom.m())
        })
    });
}

criterion_group!(
    benches,
    bench_ricci,
    bench_variation,
    bench_classify,
    bench_solve,
    bench_load
);
criterion_main!(benches);
