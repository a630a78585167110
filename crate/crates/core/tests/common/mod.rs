//! Reference implementations shared by the oracle and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use listramsey::mono::find_monochromatic_generic;
use listramsey::{complete_hypergraph, families, EdgeColoring, Hypergraph, ListAssignment, SearchBudget};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn budget() -> SearchBudget {
    SearchBudget::default()
}

pub fn kn(n: usize) -> Arc<Hypergraph> {
    Arc::new(complete_hypergraph(n, 2).unwrap())
}

pub fn graph_patterns() -> Vec<(&'static str, Hypergraph)> {
    vec![
        ("K3", families::clique(3, 2).unwrap()),
        ("K4", families::clique(4, 2).unwrap()),
        ("S2", families::star(2)),
        ("S3", families::star(3)),
        ("S4", families::star(4)),
        ("M2", families::matching(2)),
        ("M3", families::matching(3)),
        ("C4", families::cycle(4)),
        ("C5", families::cycle(5)),
        ("P3", families::path(3)),
    ]
}

pub fn random_subgraph(rng: &mut ChaCha8Rng, n: usize, max_edges: usize) -> Hypergraph {
    let all = complete_hypergraph(n, 2).unwrap();
    let mut picked: Vec<usize> = (0..all.edge_count()).filter(|_| rng.gen_bool(0.6)).collect();
    picked.truncate(max_edges);
    all.edge_subgraph(picked)
}

/// Tries every L-coloring.
pub fn brute_force_good_coloring(pattern: &Hypergraph, lists: &ListAssignment) -> bool {
    let host = lists.host_arc().clone();
    let e = host.edge_count();
    let mut idx = vec![0usize; e];
    loop {
        let colors = (0..e).map(|i| lists.list(i)[idx[i]]).collect();
        let c = EdgeColoring::new(host.clone(), colors).unwrap();
        if find_monochromatic_generic(pattern, &c).unwrap().is_none() {
            return true;
        }
        let mut i = 0;
        loop {
            if i == e {
                return false;
            }
            idx[i] += 1;
            if idx[i] < lists.k() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Max of (e−1)/(v−ℓ) over connected edge subsets; 1/ℓ when all edges are disjoint.
pub fn density_connected(h: &Hypergraph) -> (i64, i64) {
    let e = h.edge_count();
    let l = h.uniformity() as i64;
    let mut best: Option<(i64, i64)> = None;
    for mask in 1u32..(1 << e) {
        if mask.count_ones() < 2 {
            continue;
        }
        let chosen: Vec<usize> = (0..e).filter(|i| mask >> i & 1 == 1).collect();
        let mut reached = vec![chosen[0]];
        let mut frontier = vec![chosen[0]];
        while let Some(a) = frontier.pop() {
            for &b in &chosen {
                if !reached.contains(&b) && h.edge(a).iter().any(|&v| h.edge(b).contains(v)) {
                    reached.push(b);
                    frontier.push(b);
                }
            }
        }
        if reached.len() != chosen.len() {
            continue;
        }
        let verts: BTreeSet<usize> = chosen.iter().flat_map(|&i| h.edge(i).iter().copied()).collect();
        let cand = (chosen.len() as i64 - 1, verts.len() as i64 - l);
        if best.is_none_or(|b| cand.0 * b.1 > b.0 * cand.1) {
            best = Some(cand);
        }
    }
    best.unwrap_or((1, l))
}
