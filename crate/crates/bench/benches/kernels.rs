use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use listramsey::bounds::{bound_table, random_lists};
use listramsey::canon::{enumerate_patterns, EnumOptions, HostSymmetry};
use listramsey::decomp::{cycle_decompose, walecki};
use listramsey::listcolor::{galvin_color, BipartiteGraph};
use listramsey::matching::maximum_matching;
use listramsey::solver::{adversary_color, ramsey_exact};
use listramsey::witness::{matching_witness, star_free_coloring, MatchingPlan};
use listramsey::{complete_hypergraph, families, Hypergraph, ListAssignment, SearchBudget};

fn k(n: usize) -> Arc<Hypergraph> {
    Arc::new(complete_hypergraph(n, 2).unwrap())
}

fn search(c: &mut Criterion) {
    let budget = SearchBudget::default();
    c.bench_function("ramsey_exact K3 2 colors", |b| {
        b.iter(|| ramsey_exact(&families::clique(3, 2).unwrap(), 2, 7, &budget).unwrap())
    });
    c.bench_function("ramsey_exact 3K2 2 colors", |b| {
        b.iter(|| ramsey_exact(&families::matching(3), 2, 9, &budget).unwrap())
    });
    let lists = random_lists(&k(5), 2, 4, 1, 0);
    let tri = families::clique(3, 2).unwrap();
    c.bench_function("adversary K3 on random 2-lists K5", |b| {
        b.iter(|| adversary_color(&tri, black_box(&lists), &budget).unwrap())
    });
}

fn canon(c: &mut Criterion) {
    let host = k(4);
    let sym = HostSymmetry::of(&host).unwrap();
    c.bench_function("enumerate 2-list patterns on K4", |b| {
        b.iter(|| enumerate_patterns(&host, 2, &sym, &EnumOptions::default()).unwrap().len())
    });
    c.bench_function("automorphisms of K6", |b| {
        b.iter(|| HostSymmetry::of(black_box(&complete_hypergraph(6, 2).unwrap())).unwrap().order())
    });
}

fn constructions(c: &mut Criterion) {
    c.bench_function("walecki K12", |b| b.iter(|| walecki(black_box(12)).unwrap()));
    c.bench_function("4-cycle decomposition K9", |b| b.iter(|| cycle_decompose(black_box(9), 4).unwrap()));

    let d = cycle_decompose(9, 4).unwrap();
    let lists = random_lists(&k(9), 2, 4, 2, 0);
    c.bench_function("star-compose r=5 on K9", |b| b.iter(|| star_free_coloring(&d, black_box(&lists), 2, 5).unwrap()));

    let kab =
        Arc::new(Hypergraph::new(2, 16, (0..8).flat_map(|a| (8..16).map(move |b| vec![a, b])).collect()).unwrap());
    let bip = BipartiteGraph::detect(kab.clone()).unwrap();
    let lists: ListAssignment = random_lists(&kab, 8, 16, 3, 0);
    c.bench_function("galvin K8,8 from 8-lists", |b| b.iter(|| galvin_color(&bip, black_box(&lists)).unwrap()));

    let plan = MatchingPlan::new(100, 60);
    let lists = random_lists(&k(plan.n), 60, 200, 4, 0);
    let mut group = c.benchmark_group("type reduction");
    group.sample_size(10);
    group.bench_function("r=100 k=60 on K397", |b| b.iter(|| matching_witness(&plan, black_box(&lists)).unwrap()));
    group.finish();
}

fn numerics(c: &mut Criterion) {
    c.bench_function("bound grid 2..100 x 2..100", |b| b.iter(|| bound_table(2..=100, 2..=100).unwrap().len()));
    let host = k(40);
    let edges: Vec<(usize, usize)> = host.edges().iter().map(|e| (e[0], e[1])).collect();
    c.bench_function("blossom K40", |b| b.iter(|| maximum_matching(40, black_box(&edges))));
}

criterion_group!(benches, search, canon, constructions, numerics);
criterion_main!(benches);
