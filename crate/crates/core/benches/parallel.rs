use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dyncool::circuit::synthesize_permutation;
use dyncool::curves::{linspace, population_curves, work_curves};
use dyncool::noise::{run_cooling_sim_with, NoiseModel};
use dyncool::protocols::mirror_permutation;
use dyncool::{Execution, ThermalEnsembleSpec};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo_shots");
    group.sample_size(10);
    for n in [5usize, 8] {
        let spec = ThermalEnsembleSpec::new(n, 5e9, 0.1).unwrap();
        let gates = synthesize_permutation(&mirror_permutation(n).unwrap());
        let noise = NoiseModel::new(0.02).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| run_cooling_sim_with(&gates, &spec, &noise, black_box(20_000), 7, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn work_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimal_work_sweep");
    group.sample_size(10);
    let grid = linspace(0.0, 0.5, 26);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| work_curves(black_box(&grid), &[256, 1024], exec).unwrap())
        });
    }
    group.finish();
}

fn population_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("population_sweep");
    let grid = linspace(0.0, 1.0, 201);
    let sizes: Vec<usize> = (2..=10).map(|k| 1usize << k).collect();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| population_curves(black_box(&grid), &sizes, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, work_sweep, population_sweep);
criterion_main!(benches);
