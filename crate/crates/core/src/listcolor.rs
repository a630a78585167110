//! Proper list edge colorings.
//!
//! [`galvin_color`] follows Galvin's kernel argument on bipartite graphs;
//! [`clique_list_edge_color`] and [`find_proper_list_coloring`] are exact
//! backtracking searches; [`edge_choosability`] decides whether every k-list
//! assignment admits a proper coloring by running the search on every
//! canonical list pattern.

use std::collections::VecDeque;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{enumerate_patterns, CanonError, EnumOptions, HostSymmetry};
use crate::coloring::{Color, EdgeColoring, ListAssignment};
use crate::hypergraph::{complete_hypergraph, GraphError, Hypergraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ListColorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error("list size {k} is below the required {needed}")]
    ListTooShort { k: usize, needed: usize },
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("host is not the complete graph K_{0}")]
    NotComplete(usize),
    /// A routine whose success is guaranteed by theory failed.
    #[error("internal defect: {0}")]
    Defect(String),
}

/// A graph with a fixed bipartition `X ∪ Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    graph: Arc<Hypergraph>,
    in_x: Vec<bool>,
}

impl BipartiteGraph {
    /// `in_x[v]` says which side `v` is on; every edge must cross.
    pub fn new(graph: Arc<Hypergraph>, in_x: Vec<bool>) -> Result<Self, ListColorError> {
        if graph.uniformity() != 2 {
            return Err(GraphError::NotAGraph(graph.uniformity()).into());
        }
        if in_x.len() != graph.vertex_count() {
            return Err(
                GraphError::LengthMismatch { what: "sides", expected: graph.vertex_count(), got: in_x.len() }.into()
            );
        }
        if graph.edges().iter().any(|e| in_x[e[0]] == in_x[e[1]]) {
            return Err(ListColorError::NotBipartite);
        }
        Ok(BipartiteGraph { graph, in_x })
    }

    /// Finds a bipartition by breadth-first 2-coloring.
    pub fn detect(graph: Arc<Hypergraph>) -> Result<Self, ListColorError> {
        if graph.uniformity() != 2 {
            return Err(GraphError::NotAGraph(graph.uniformity()).into());
        }
        let adj = graph.adjacency();
        let n = graph.vertex_count();
        let mut side: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(true);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let sv = side[v].expect("visited");
                for &w in &adj[v] {
                    match side[w] {
                        None => {
                            side[w] = Some(!sv);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == sv => return Err(ListColorError::NotBipartite),
                        Some(_) => {}
                    }
                }
            }
        }
        let in_x = side.into_iter().map(|s| s.expect("all visited")).collect();
        Ok(BipartiteGraph { graph, in_x })
    }

    pub fn graph(&self) -> &Arc<Hypergraph> {
        &self.graph
    }

    pub fn is_x(&self, v: usize) -> bool {
        self.in_x[v]
    }

    pub fn max_degree(&self) -> usize {
        self.graph.max_degree()
    }

    /// Endpoints of edge `i` as `(x, y)`.
    fn ends(&self, i: usize) -> (usize, usize) {
        let e = self.graph.edge(i);
        if self.in_x[e[0]] {
            (e[0], e[1])
        } else {
            (e[1], e[0])
        }
    }
}

const NONE: usize = usize::MAX;

/// A proper Δ-edge-coloring of a bipartite graph with colors `0..Δ`, by
/// alternating-path recoloring.
pub fn konig_edge_coloring(g: &BipartiteGraph) -> Vec<usize> {
    let host = &g.graph;
    let n = host.vertex_count();
    let delta = g.max_degree();
    let mut at = vec![NONE; n * delta.max(1)];
    let mut phi = vec![NONE; host.edge_count()];
    let free = |at: &[usize], v: usize| (0..delta).find(|&c| at[v * delta + c] == NONE).expect("degree below Δ");
    for i in 0..host.edge_count() {
        let (x, y) = g.ends(i);
        let a = free(&at, x);
        let b = free(&at, y);
        if at[y * delta + a] != NONE {
            // swap a and b along the a/b path starting at y; it cannot reach x
            let mut path = Vec::new();
            let mut v = y;
            let mut c = a;
            while at[v * delta + c] != NONE {
                let ei = at[v * delta + c];
                path.push(ei);
                let e = host.edge(ei);
                v = if e[0] == v { e[1] } else { e[0] };
                c = if c == a { b } else { a };
            }
            for &ei in &path {
                let e = host.edge(ei);
                at[e[0] * delta + phi[ei]] = NONE;
                at[e[1] * delta + phi[ei]] = NONE;
            }
            for &ei in &path {
                let e = host.edge(ei);
                phi[ei] = if phi[ei] == a { b } else { a };
                at[e[0] * delta + phi[ei]] = ei;
                at[e[1] * delta + phi[ei]] = ei;
            }
        }
        phi[i] = a;
        at[x * delta + a] = i;
        at[y * delta + a] = i;
    }
    phi
}

/// Kernel of the line-graph orientation restricted to `edges`: a stable
/// matching where X-vertices prefer larger φ and Y-vertices smaller φ.
fn kernel(g: &BipartiteGraph, phi: &[usize], edges: &[usize]) -> Vec<usize> {
    let n = g.graph.vertex_count();
    let mut by_x: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &i in edges {
        by_x[g.ends(i).0].push(i);
    }
    for list in by_x.iter_mut() {
        list.sort_by_key(|&i| std::cmp::Reverse(phi[i]));
    }
    let mut next = vec![0usize; n];
    let mut held = vec![NONE; n];
    let mut free: Vec<usize> = (0..n).filter(|&x| !by_x[x].is_empty()).collect();
    while let Some(x) = free.pop() {
        if next[x] == by_x[x].len() {
            continue;
        }
        let i = by_x[x][next[x]];
        next[x] += 1;
        let y = g.ends(i).1;
        let cur = held[y];
        if cur == NONE {
            held[y] = i;
        } else if phi[i] < phi[cur] {
            held[y] = i;
            free.push(g.ends(cur).0);
        } else {
            free.push(x);
        }
    }
    let mut k: Vec<usize> = held.into_iter().filter(|&i| i != NONE).collect();
    k.sort_unstable();
    k
}

/// Proper list edge coloring of a bipartite graph from lists of size at
/// least its maximum degree.
pub fn galvin_color(g: &BipartiteGraph, lists: &ListAssignment) -> Result<EdgeColoring, ListColorError> {
    if **lists.host_arc() != **g.graph() {
        return Err(GraphError::HostMismatch.into());
    }
    let delta = g.max_degree();
    if lists.k() < delta {
        return Err(ListColorError::ListTooShort { k: lists.k(), needed: delta });
    }
    let phi = konig_edge_coloring(g);
    let e = g.graph.edge_count();
    let mut remaining: Vec<Vec<Color>> = lists.lists().to_vec();
    let mut color: Vec<Option<Color>> = vec![None; e];
    for c in lists.universe() {
        let holders: Vec<usize> = (0..e).filter(|&i| color[i].is_none() && remaining[i].contains(&c)).collect();
        if holders.is_empty() {
            continue;
        }
        let k = kernel(g, &phi, &holders);
        for &i in &k {
            color[i] = Some(c);
        }
        for &i in &holders {
            if color[i].is_none() {
                remaining[i].retain(|&x| x != c);
            }
        }
    }
    let colors = color
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| ListColorError::Defect(format!("edge {:?} left uncolored", g.graph.edge(i)))))
        .collect::<Result<Vec<_>, _>>()?;
    let out = EdgeColoring::new(lists.host_arc().clone(), colors)?;
    if !out.is_proper() {
        return Err(ListColorError::Defect("kernel coloring is not proper".into()));
    }
    Ok(out)
}

/// Exact search for a proper coloring from the lists: most constrained edge
/// first, colors ascending. Returns `None` when none exists.
pub fn find_proper_list_coloring(lists: &ListAssignment) -> Result<Option<EdgeColoring>, ListColorError> {
    let host = lists.host();
    if host.uniformity() != 2 {
        return Err(GraphError::NotAGraph(host.uniformity()).into());
    }
    let e = host.edge_count();
    let nbrs: Vec<Vec<usize>> = (0..e)
        .map(|i| (0..e).filter(|&j| i != j && host.edge(i).iter().any(|&v| host.edge(j).contains(v))).collect())
        .collect();
    let mut color: Vec<Option<Color>> = vec![None; e];
    fn go(lists: &ListAssignment, nbrs: &[Vec<usize>], color: &mut Vec<Option<Color>>, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        let mut best: Option<(usize, Vec<Color>)> = None;
        for i in 0..color.len() {
            if color[i].is_some() {
                continue;
            }
            let avail: Vec<Color> =
                lists.list(i).iter().copied().filter(|&c| nbrs[i].iter().all(|&j| color[j] != Some(c))).collect();
            if best.as_ref().is_none_or(|(_, b)| avail.len() < b.len()) {
                let empty = avail.is_empty();
                best = Some((i, avail));
                if empty {
                    return false;
                }
            }
        }
        let (i, avail) = best.expect("an uncolored edge");
        for c in avail {
            color[i] = Some(c);
            if go(lists, nbrs, color, left - 1) {
                return true;
            }
        }
        color[i] = None;
        false
    }
    if !go(lists, &nbrs, &mut color, e) {
        return Ok(None);
    }
    let colors = color.into_iter().map(|c| c.expect("all colored")).collect();
    Ok(Some(EdgeColoring::new(lists.host_arc().clone(), colors)?))
}

/// Proper list edge coloring of K_m from lists of size at least m.
pub fn clique_list_edge_color(m: usize, lists: &ListAssignment) -> Result<EdgeColoring, ListColorError> {
    let host = lists.host();
    if host.uniformity() != 2 || host.vertex_count() != m || host.edge_count() != m * m.saturating_sub(1) / 2 {
        return Err(ListColorError::NotComplete(m));
    }
    if lists.k() < m {
        return Err(ListColorError::ListTooShort { k: lists.k(), needed: m });
    }
    find_proper_list_coloring(lists)?
        .ok_or_else(|| ListColorError::Defect(format!("no proper list coloring of K_{m} from {}-lists", lists.k())))
}

/// True iff every assignment of k-lists to the edges of `g` admits a proper
/// coloring. Patterns are enumerated up to color renaming and automorphisms
/// of `g`.
pub fn edge_choosability(g: &Arc<Hypergraph>, k: usize, opts: &EnumOptions) -> Result<bool, ListColorError> {
    if g.uniformity() != 2 {
        return Err(GraphError::NotAGraph(g.uniformity()).into());
    }
    if k == 0 {
        return Ok(g.edge_count() == 0);
    }
    let sym = HostSymmetry::of(g)?;
    let patterns = enumerate_patterns(g, k, &sym, opts)?;
    let verdicts: Vec<bool> = patterns
        .par_iter()
        .map(|p| find_proper_list_coloring(&p.lists).map(|c| c.is_some()))
        .collect::<Result<_, _>>()?;
    Ok(verdicts.into_iter().all(|ok| ok))
}

/// Convenience host for the clique colorer.
pub fn clique_host(m: usize) -> Arc<Hypergraph> {
    Arc::new(complete_hypergraph(m, 2).expect("uniformity 2"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_list_coloring;
    use crate::hypergraph::families;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_lists(host: &Arc<Hypergraph>, k: usize, palette: u32, rng: &mut impl Rng) -> ListAssignment {
        let lists = (0..host.edge_count())
            .map(|_| rand::seq::index::sample(rng, palette as usize, k).into_iter().map(|c| c as Color).collect())
            .collect();
        ListAssignment::new(host.clone(), k, lists).unwrap()
    }

    #[test]
    fn four_cycle_uniform_lists() {
        let g = Arc::new(families::cycle(4));
        let b = BipartiteGraph::detect(g.clone()).unwrap();
        let lists = ListAssignment::new(g.clone(), 2, vec![vec![1, 2]; 4]).unwrap();
        let c = galvin_color(&b, &lists).unwrap();
        assert!(c.is_proper());
        assert_eq!(c.palette(), vec![1, 2]);
    }

    #[test]
    fn single_edge() {
        let g = Arc::new(families::path(1));
        let b = BipartiteGraph::detect(g.clone()).unwrap();
        let lists = ListAssignment::new(g, 1, vec![vec![7]]).unwrap();
        assert_eq!(galvin_color(&b, &lists).unwrap().colors(), &[7]);
    }

    #[test]
    fn short_lists_rejected() {
        let g = Arc::new(families::star(3));
        let b = BipartiteGraph::detect(g.clone()).unwrap();
        let lists = ListAssignment::uniform(g, 2);
        assert_eq!(galvin_color(&b, &lists), Err(ListColorError::ListTooShort { k: 2, needed: 3 }));
        assert_eq!(BipartiteGraph::detect(clique_host(3)), Err(ListColorError::NotBipartite));
    }

    #[test]
    fn konig_is_proper_with_delta_colors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let (a, b) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
            let edges: Vec<Vec<usize>> =
                (0..a).flat_map(|x| (0..b).map(move |y| vec![x, a + y])).filter(|_| rng.gen_bool(0.5)).collect();
            let g = Arc::new(Hypergraph::new(2, a + b, edges).unwrap());
            let bg = BipartiteGraph::new(g.clone(), (0..a + b).map(|v| v < a).collect()).unwrap();
            let phi = konig_edge_coloring(&bg);
            let c = EdgeColoring::new(g.clone(), phi.iter().map(|&p| p as Color).collect()).unwrap();
            assert!(c.is_proper());
            assert!(phi.iter().all(|&p| p < g.max_degree().max(1)));
        }
    }

    #[test]
    fn galvin_random_bipartite() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let (a, b) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
            let p = rng.gen_range(0.2..0.9);
            let edges: Vec<Vec<usize>> =
                (0..a).flat_map(|x| (0..b).map(move |y| vec![x, a + y])).filter(|_| rng.gen_bool(p)).collect();
            let g = Arc::new(Hypergraph::new(2, a + b, edges).unwrap());
            let bg = BipartiteGraph::new(g.clone(), (0..a + b).map(|v| v < a).collect()).unwrap();
            let k = g.max_degree().max(1);
            let lists = random_lists(&g, k, (k + rng.gen_range(0..4)) as u32, &mut rng);
            let c = galvin_color(&bg, &lists).unwrap();
            assert!(c.is_proper());
            assert!(verify_list_coloring(&lists, &c).unwrap());
        }
    }

    #[test]
    fn cliques() {
        let h = clique_host(2);
        let c = clique_list_edge_color(2, &ListAssignment::new(h, 2, vec![vec![1, 2]]).unwrap()).unwrap();
        assert!([1, 2].contains(&c.color(0)));
        let h = clique_host(3);
        let c = clique_list_edge_color(3, &ListAssignment::new(h, 3, vec![vec![1, 2, 3]; 3]).unwrap()).unwrap();
        assert_eq!(c.palette(), vec![1, 2, 3]);
        let h = clique_host(4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let lists = random_lists(&h, 4, 7, &mut rng);
            let c = clique_list_edge_color(4, &lists).unwrap();
            assert!(c.is_proper() && verify_list_coloring(&lists, &c).unwrap());
        }
        assert!(matches!(
            clique_list_edge_color(4, &ListAssignment::uniform(h, 3)),
            Err(ListColorError::ListTooShort { .. })
        ));
    }

    #[test]
    fn choosability_small_cases() {
        let opts = EnumOptions::default();
        assert!(edge_choosability(&clique_host(3), 3, &opts).unwrap());
        assert!(!edge_choosability(&clique_host(3), 2, &opts).unwrap());
        assert!(edge_choosability(&Arc::new(families::path(2)), 2, &opts).unwrap());
        assert!(!edge_choosability(&Arc::new(families::path(2)), 1, &opts).unwrap());
        assert!(edge_choosability(&Arc::new(families::cycle(4)), 2, &opts).unwrap());
        assert!(!edge_choosability(&Arc::new(families::cycle(5)), 2, &opts).unwrap());
    }

    #[test]
    fn small_even_cliques_are_class_one_choosable() {
        // χ′(K_2) = 1 and χ′(K_4) = 3; the list versions agree
        let opts = EnumOptions::default();
        assert!(edge_choosability(&clique_host(2), 1, &opts).unwrap());
        assert!(edge_choosability(&clique_host(4), 3, &opts).unwrap());
        assert!(!edge_choosability(&clique_host(4), 2, &opts).unwrap());
    }
}
