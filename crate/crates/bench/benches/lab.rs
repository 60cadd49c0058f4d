//! Benchmarks for the hot paths: graph construction and clique census,
//! Bloch-side time evolution (a dense matrix exponential), Lie-algebra
//! closure from the swap generators, and sampled tomography.

use blochlab_core::{
    all_pentagon_swaps, build_graph, clique_census, evolve_bloch, lie_closure,
    multi_shot_tomography, pentagon_swap_generator, random_pure, single_shot, Hamiltonian,
    QuestionIndex,
};
use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

fn bench_graph(c: &mut Criterion) {
    let mut group = c.benchmark_group("graph");
    group.bench_function("build_two_qubits", |b| {
        b.iter(|| build_graph(black_box(2)).unwrap())
    });
    group.bench_function("build_three_qubits", |b| {
        b.iter(|| build_graph(black_box(3)).unwrap())
    });
    let g = build_graph(2).unwrap();
    group.bench_function("clique_census_two_qubits", |b| {
        b.iter(|| clique_census(black_box(&g)))
    });
    group.finish();
}

fn bench_evolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("evolution");
    let swap = pentagon_swap_generator(1, 2).unwrap();
    let state = random_pure(2, 7).unwrap();
    group.bench_function("swap_exponential", |b| {
        b.iter(|| evolve_bloch(black_box(&swap), black_box(&state), black_box(1.0)).unwrap())
    });
    let h = Hamiltonian::random(2, 11).unwrap();
    group.bench_function("adjoint_generator", |b| {
        b.iter(|| blochlab_core::generator_from_hamiltonian(black_box(&h)))
    });
    group.finish();
}

fn bench_closure(c: &mut Criterion) {
    let swaps = all_pentagon_swaps();
    c.bench_function("lie_closure_fifteen_swaps", |b| {
        b.iter_batched(
            || swaps.clone(),
            |gens| lie_closure(black_box(&gens)).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_interrogation(c: &mut Criterion) {
    let mut group = c.benchmark_group("interrogation");
    let state = random_pure(2, 3).unwrap();
    let sequence: Vec<QuestionIndex> =
        vec!["11".parse().unwrap(), "23".parse().unwrap(), "30".parse().unwrap()];
    group.bench_function("single_shot_three_questions", |b| {
        b.iter(|| single_shot(black_box(&state), black_box(&sequence), black_box(5)).unwrap())
    });
    group.bench_function("tomography_10k_samples", |b| {
        b.iter(|| multi_shot_tomography(black_box(&state), black_box(10_000), black_box(5)).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_graph,
    bench_evolution,
    bench_closure,
    bench_interrogation
);
criterion_main!(benches);
