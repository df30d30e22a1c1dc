use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fracspec::grid::log_grid;
use fracspec::spectrum::{diamond_spectrum, sphere_spectrum};
use fracspec::sweep;
use fracspec::traces::heat_trace;
use fracspec::DiamondParams;

fn bench_heat_trace_grid(c: &mut Criterion) {
    let d62 = diamond_spectrum(DiamondParams::new(6, 2).unwrap());
    let s2 = sphere_spectrum(2).unwrap();
    let mut group = c.benchmark_group("heat_trace_grid");
    for &points in &[64usize, 512] {
        let grid = log_grid(1e-8, 1e-1, points);
        group.bench_with_input(BenchmarkId::new("diamond_sequential", points), &grid, |b, g| {
            b.iter(|| sweep::map_sequential(g, |&t| heat_trace(&d62, black_box(t), 1e-12).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("diamond_parallel", points), &grid, |b, g| {
            b.iter(|| sweep::map(g, |&t| heat_trace(&d62, black_box(t), 1e-12).unwrap()))
        });
        let sphere_grid = log_grid(1e-5, 1.0, points);
        group.bench_with_input(BenchmarkId::new("sphere_sequential", points), &sphere_grid, |b, g| {
            b.iter(|| sweep::map_sequential(g, |&t| heat_trace(&s2, black_box(t), 1e-12).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("sphere_parallel", points), &sphere_grid, |b, g| {
            b.iter(|| sweep::map(g, |&t| heat_trace(&s2, black_box(t), 1e-12).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_heat_trace_grid);
criterion_main!(benches);
