//! Rayon vs sequential on the per-step kernels.
//!
//! Both paths always exist in a `parallel` build: `exec::set_parallel`
//! flips the dispatch at runtime, so the comparison measures the identical
//! code with and without data parallelism.
//!
//!   cargo bench -p hocl-core

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hocl_core::exec;
use hocl_core::geometry::project_to_ball;
use hocl_core::graph::{build_graph, SparseGraph};
use hocl_core::oscillator::{
    euler_phase_step, local_attention_matrix, CouplingVariant, OscillatorState,
};
use hocl_core::rng::DeterministicRng;

fn setup(n: usize, k_cap: usize) -> (OscillatorState, SparseGraph) {
    let mut rng = DeterministicRng::new(42);
    let points: Vec<_> = (0..n)
        .map(|_| {
            let c: Vec<f64> = (0..4).map(|_| rng.normal() * 0.3).collect();
            project_to_ball(&c).unwrap()
        })
        .collect();
    let graph = build_graph(&points, 1e9, Some(k_cap)).unwrap();
    let phases: Vec<f64> = (0..n).map(|_| rng.phase()).collect();
    let freqs: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
    let state = OscillatorState::new(phases, freqs, 2.0, 1.0).unwrap();
    (state, graph)
}

fn bench_phase_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("sparse_phase_step");
    for &n in &[512usize, 2048, 8192] {
        let (state, graph) = setup(n, 16);
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, _| {
            exec::set_parallel(true);
            b.iter(|| {
                euler_phase_step(&state, 0.01, CouplingVariant::SparseLocal, Some(&graph)).unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, _| {
            exec::set_parallel(false);
            b.iter(|| {
                euler_phase_step(&state, 0.01, CouplingVariant::SparseLocal, Some(&graph)).unwrap()
            })
        });
        exec::set_parallel(true);
    }
    group.finish();
}

fn bench_attention(c: &mut Criterion) {
    let mut group = c.benchmark_group("local_attention");
    for &n in &[512usize, 2048, 8192] {
        let (state, graph) = setup(n, 16);
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, _| {
            exec::set_parallel(true);
            b.iter(|| local_attention_matrix(&state, &graph).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, _| {
            exec::set_parallel(false);
            b.iter(|| local_attention_matrix(&state, &graph).unwrap())
        });
        exec::set_parallel(true);
    }
    group.finish();
}

fn bench_graph_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("graph_build");
    group.sample_size(20);
    for &n in &[512usize, 2048] {
        let mut rng = DeterministicRng::new(7);
        let points: Vec<_> = (0..n)
            .map(|_| {
                let coords: Vec<f64> = (0..4).map(|_| rng.normal() * 0.3).collect();
                project_to_ball(&coords).unwrap()
            })
            .collect();
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, _| {
            exec::set_parallel(true);
            b.iter(|| build_graph(&points, 1e9, Some(16)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, _| {
            exec::set_parallel(false);
            b.iter(|| build_graph(&points, 1e9, Some(16)).unwrap())
        });
        exec::set_parallel(true);
    }
    group.finish();
}

criterion_group!(benches, bench_phase_step, bench_attention, bench_graph_build);
criterion_main!(benches);
