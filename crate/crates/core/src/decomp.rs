//! Edge decompositions of complete graphs and an independent checker.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{complete_hypergraph, Hypergraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("walecki needs an even n >= 2, got {0}")]
    WaleckiOrder(usize),
    #[error("cycle decomposition needs odd n, got {0}")]
    EvenOrder(usize),
    #[error("cycle length {m} out of range for n = {n}")]
    CycleLength { n: usize, m: usize },
    #[error("{m} does not divide {edges}, the edge count of K_{n}")]
    NotDivisible { n: usize, m: usize, edges: usize },
    #[error("no rotational base cycles found for n = {n}, m = {m}")]
    NoBaseCycles { n: usize, m: usize },
    #[error("star block partition needs r >= 2 and k >= 1 (got r = {r}, k = {k})")]
    BlockParameters { r: usize, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PieceKind {
    PerfectMatching,
    HamiltonCycle,
    Cycle,
    CliqueBlock,
    BipartiteBlock,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub kind: PieceKind,
    pub graph: Hypergraph,
}

/// An ordered family of subgraphs meant to partition the host's edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub host: Hypergraph,
    pub pieces: Vec<Piece>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub edge_disjoint: bool,
    pub covers: bool,
    /// Number of pieces with an edge at each host vertex.
    pub membership: Vec<usize>,
}

impl DecompositionReport {
    pub fn is_partition(&self) -> bool {
        self.edge_disjoint && self.covers
    }

    pub fn max_membership(&self) -> usize {
        self.membership.iter().copied().max().unwrap_or(0)
    }
}

/// Checks disjointness and coverage from scratch, without trusting piece
/// kinds.
pub fn verify_decomposition(d: &Decomposition) -> DecompositionReport {
    let host = &d.host;
    let mut hits = vec![0usize; host.edge_count()];
    let mut stray = false;
    let mut membership = vec![0usize; host.vertex_count()];
    for piece in &d.pieces {
        let mut touched = vec![false; host.vertex_count().max(piece.graph.vertex_count())];
        for e in piece.graph.edges() {
            match host.index_of(e) {
                Some(i) => hits[i] += 1,
                None => stray = true,
            }
            for &v in e.iter() {
                touched[v] = true;
            }
        }
        for (v, t) in touched.iter().enumerate().take(host.vertex_count()) {
            if *t {
                membership[v] += 1;
            }
        }
    }
    DecompositionReport {
        edge_disjoint: hits.iter().all(|&h| h <= 1),
        covers: !stray && hits.iter().all(|&h| h >= 1),
        membership,
    }
}

fn cycle_graph(n: usize, seq: &[usize]) -> Hypergraph {
    let m = seq.len();
    let edges = (0..m).map(|i| vec![seq[i], seq[(i + 1) % m]]).collect();
    Hypergraph::new(2, n, edges).expect("cycle on distinct vertices")
}

/// Hamilton cycles of K_{N+1} on `Z_N ∪ {N}` for even `N`: the zigzag path
/// i, i+1, i−1, i+2, … through `Z_N`, closed through the extra vertex `N`,
/// for i in 0..N/2.
fn zigzag_cycles(big_n: usize) -> Vec<Vec<usize>> {
    let inf = big_n;
    (0..big_n / 2)
        .map(|i| {
            let mut seq = vec![inf];
            for j in 0..big_n {
                let offset = if j % 2 == 1 { j.div_ceil(2) as i64 } else { -((j / 2) as i64) };
                seq.push((i as i64 + offset).rem_euclid(big_n as i64) as usize);
            }
            seq
        })
        .collect()
}

/// One perfect matching and (n−2)/2 Hamilton cycles of K_n, n even.
pub fn walecki(n: usize) -> Result<Decomposition, DecompError> {
    if n < 2 || n % 2 == 1 {
        return Err(DecompError::WaleckiOrder(n));
    }
    let host = complete_hypergraph(n, 2).expect("uniformity 2");
    let hub = n - 1;
    let inf = n - 2;
    let big_n = n - 2;
    let mut matching = vec![vec![hub, inf]];
    let mut pieces = Vec::new();
    for mut seq in zigzag_cycles(big_n) {
        // route the diametral edge {j, j + N/2} through the hub
        let len = seq.len();
        let at = (0..len)
            .find(|&i| {
                let (a, b) = (seq[i], seq[(i + 1) % len]);
                a != inf && b != inf && (a + big_n - b) % big_n == big_n / 2
            })
            .expect("zigzag path has a diametral step");
        let (a, b) = (seq[at], seq[(at + 1) % len]);
        matching.push(vec![a, b]);
        seq.insert(at + 1, hub);
        pieces.push(Piece { kind: PieceKind::HamiltonCycle, graph: cycle_graph(n, &seq) });
    }
    let graph = Hypergraph::new(2, n, matching).expect("diametral edges are disjoint");
    pieces.insert(0, Piece { kind: PieceKind::PerfectMatching, graph });
    Ok(Decomposition { host, pieces })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A base cycle: `steps` is one period of signed differences, repeated
/// `stabilizer` times around the cycle.
#[derive(Debug, Clone)]
struct BaseCycle {
    steps: Vec<i64>,
    stabilizer: usize,
}

struct RotationalSearch {
    n: usize,
    m: usize,
    classes: usize,
    used: Vec<bool>,
    bases: Vec<BaseCycle>,
}

impl RotationalSearch {
    fn run(&mut self) -> bool {
        let Some(first) = (1..=self.classes).find(|&d| !self.used[d]) else {
            return true;
        };
        let free = (1..=self.classes).filter(|&d| !self.used[d]).count();
        let g = gcd(self.n, self.m);
        for s in (1..=g).filter(|s| g.is_multiple_of(*s)) {
            let p = self.m / s;
            if p > free {
                continue;
            }
            self.used[first] = true;
            let mut steps = vec![first as i64];
            let mut sums = vec![0i64, first as i64];
            if self.extend(s, p, &mut steps, &mut sums) {
                return true;
            }
            self.used[first] = false;
        }
        false
    }

    fn extend(&mut self, s: usize, p: usize, steps: &mut Vec<i64>, sums: &mut Vec<i64>) -> bool {
        let n = self.n as i64;
        let block = n / s as i64;
        if steps.len() == p {
            let total = sums[p].rem_euclid(n);
            if total % block != 0 || gcd((total / block) as usize, s) != 1 {
                return false;
            }
            self.bases.push(BaseCycle { steps: steps.clone(), stabilizer: s });
            if self.run() {
                return true;
            }
            self.bases.pop();
            return false;
        }
        for d in 1..=self.classes {
            if self.used[d] {
                continue;
            }
            for sign in [1i64, -1] {
                let next = sums[sums.len() - 1] + sign * d as i64;
                // the first p partial sums are the period's vertices
                let is_vertex = steps.len() + 1 < p;
                if is_vertex && sums.iter().any(|&x| (x - next).rem_euclid(block) == 0) {
                    continue;
                }
                self.used[d] = true;
                steps.push(sign * d as i64);
                sums.push(next);
                if self.extend(s, p, steps, sums) {
                    return true;
                }
                sums.pop();
                steps.pop();
                self.used[d] = false;
            }
        }
        false
    }
}

impl BaseCycle {
    fn vertices(&self, n: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut x = 0i64;
        for _ in 0..self.stabilizer {
            for &st in &self.steps {
                out.push(x.rem_euclid(n as i64) as usize);
                x += st;
            }
        }
        out
    }
}

/// Decomposition of K_n (n odd) into cycles of length m.
///
/// m = n uses the zigzag Hamilton decomposition. Otherwise base cycles in
/// Z_n are searched whose steps cover every difference class exactly once
/// per period; their rotation orbits partition the edges.
pub fn cycle_decompose(n: usize, m: usize) -> Result<Decomposition, DecompError> {
    if n.is_multiple_of(2) {
        return Err(DecompError::EvenOrder(n));
    }
    if m < 3 || m > n {
        return Err(DecompError::CycleLength { n, m });
    }
    let edges = n * (n - 1) / 2;
    if !edges.is_multiple_of(m) {
        return Err(DecompError::NotDivisible { n, m, edges });
    }
    let host = complete_hypergraph(n, 2).expect("uniformity 2");
    if m == n {
        let pieces = zigzag_cycles(n - 1)
            .into_iter()
            .map(|seq| Piece { kind: PieceKind::HamiltonCycle, graph: cycle_graph(n, &seq) })
            .collect();
        return Ok(Decomposition { host, pieces });
    }
    let classes = (n - 1) / 2;
    let mut search = RotationalSearch { n, m, classes, used: vec![false; classes + 1], bases: Vec::new() };
    if !search.run() {
        return Err(DecompError::NoBaseCycles { n, m });
    }
    let mut pieces = Vec::new();
    for base in &search.bases {
        let verts = base.vertices(n);
        for shift in 0..n / base.stabilizer {
            let seq: Vec<usize> = verts.iter().map(|&v| (v + shift) % n).collect();
            pieces.push(Piece { kind: PieceKind::Cycle, graph: cycle_graph(n, &seq) });
        }
    }
    Ok(Decomposition { host, pieces })
}

/// The base cycles used by [`cycle_decompose`] for m < n, as vertex
/// sequences starting at 0.
pub fn rotational_base_cycles(n: usize, m: usize) -> Option<Vec<Vec<usize>>> {
    if n.is_multiple_of(2) || m < 3 || m >= n || !(n * (n - 1) / 2).is_multiple_of(m) {
        return None;
    }
    let classes = (n - 1) / 2;
    let mut search = RotationalSearch { n, m, classes, used: vec![false; classes + 1], bases: Vec::new() };
    search.run().then(|| search.bases.iter().map(|b| b.vertices(n)).collect())
}

/// K_{(r−1)k} split along vertex parts V_i = {ik, …, ik+k−1}: a clique on
/// every part and a complete bipartite graph between every two parts.
pub fn star_block_partition(r: usize, k: usize) -> Result<Decomposition, DecompError> {
    if r < 2 || k < 1 {
        return Err(DecompError::BlockParameters { r, k });
    }
    let n = (r - 1) * k;
    let host = complete_hypergraph(n, 2).expect("uniformity 2");
    let part = |i: usize| (i * k)..(i * k + k);
    let mut pieces = Vec::new();
    for i in 0..r - 1 {
        let edges = part(i).flat_map(|a| part(i).filter(move |&b| a < b).map(move |b| vec![a, b])).collect();
        pieces.push(Piece { kind: PieceKind::CliqueBlock, graph: Hypergraph::new(2, n, edges).expect("clique block") });
    }
    for i in 0..r - 1 {
        for j in i + 1..r - 1 {
            let edges = part(i).flat_map(|a| part(j).map(move |b| vec![a, b])).collect();
            pieces.push(Piece {
                kind: PieceKind::BipartiteBlock,
                graph: Hypergraph::new(2, n, edges).expect("bipartite block"),
            });
        }
    }
    Ok(Decomposition { host, pieces })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(d: &Decomposition) -> Vec<(PieceKind, usize)> {
        d.pieces.iter().map(|p| (p.kind, p.graph.edge_count())).collect()
    }

    #[test]
    fn walecki_small() {
        let d = walecki(4).unwrap();
        assert_eq!(counts(&d), vec![(PieceKind::PerfectMatching, 2), (PieceKind::HamiltonCycle, 4)]);
        assert!(verify_decomposition(&d).is_partition());
        let d = walecki(2).unwrap();
        assert_eq!(counts(&d), vec![(PieceKind::PerfectMatching, 1)]);
        assert!(walecki(5).is_err());
        assert!(walecki(0).is_err());
    }

    #[test]
    fn walecki_grid() {
        for n in (2..=30).step_by(2) {
            let d = walecki(n).unwrap();
            assert_eq!(d.pieces.len(), 1 + (n - 2) / 2);
            let rep = verify_decomposition(&d);
            assert!(rep.is_partition(), "n = {n}");
            assert!(rep.membership.iter().all(|&m| m == n / 2), "n = {n}");
            for p in &d.pieces[1..] {
                assert_eq!(p.graph.edge_count(), n);
                assert!(p.graph.degrees().iter().all(|&x| x == 2));
            }
            assert!(d.pieces[0].graph.degrees().iter().all(|&x| x == 1));
        }
    }

    #[test]
    fn nine_into_four_cycles() {
        let bases = rotational_base_cycles(9, 4).unwrap();
        assert_eq!(bases, vec![vec![0, 1, 8, 5]]);
        let d = cycle_decompose(9, 4).unwrap();
        assert_eq!(d.pieces.len(), 9);
        assert!(verify_decomposition(&d).is_partition());
    }

    #[test]
    fn five_into_hamilton_cycles() {
        let d = cycle_decompose(5, 5).unwrap();
        assert_eq!(d.pieces.len(), 2);
        let rep = verify_decomposition(&d);
        assert!(rep.is_partition());
        assert!(rep.membership.iter().all(|&m| m == 2));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(cycle_decompose(9, 7), Err(DecompError::NotDivisible { n: 9, m: 7, edges: 36 }));
        assert_eq!(cycle_decompose(8, 4), Err(DecompError::EvenOrder(8)));
        assert!(cycle_decompose(9, 2).is_err());
        // no cyclic triple system of order 9 exists
        assert_eq!(cycle_decompose(9, 3), Err(DecompError::NoBaseCycles { n: 9, m: 3 }));
    }

    #[test]
    fn odd_star_hosts() {
        for r in (5..=15).step_by(2) {
            let d = cycle_decompose(2 * r - 1, r - 1).unwrap();
            let rep = verify_decomposition(&d);
            assert!(rep.is_partition(), "r = {r}");
            assert!(rep.membership.iter().all(|&m| m == r - 1), "r = {r}");
        }
    }

    #[test]
    fn other_cycle_lengths() {
        for (n, m) in [(7, 3), (15, 5), (13, 6), (7, 7), (9, 9), (11, 5), (15, 7)] {
            let d = cycle_decompose(n, m).unwrap();
            assert_eq!(d.pieces.len(), n * (n - 1) / (2 * m));
            assert!(verify_decomposition(&d).is_partition(), "({n},{m})");
            assert!(d
                .pieces
                .iter()
                .all(|p| p.graph.edge_count() == m && p.graph.degrees().iter().all(|&x| x == 0 || x == 2)));
        }
    }

    #[test]
    fn block_partitions() {
        let d = star_block_partition(3, 2).unwrap();
        assert_eq!(
            counts(&d),
            vec![(PieceKind::CliqueBlock, 1), (PieceKind::CliqueBlock, 1), (PieceKind::BipartiteBlock, 4)]
        );
        let d = star_block_partition(2, 5).unwrap();
        assert_eq!(counts(&d), vec![(PieceKind::CliqueBlock, 10)]);
        let d = star_block_partition(4, 3).unwrap();
        let total: usize = d.pieces.iter().map(|p| p.graph.edge_count()).sum();
        assert_eq!(total, 36);
        let rep = verify_decomposition(&d);
        assert!(rep.is_partition());
        assert!(rep.membership.iter().all(|&m| m == 3));
    }

    #[test]
    fn checker_catches_overlap_and_gaps() {
        let host = complete_hypergraph(4, 2).unwrap();
        let t1 = Hypergraph::new(2, 4, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let t2 = Hypergraph::new(2, 4, vec![vec![0, 1], vec![1, 3], vec![0, 3]]).unwrap();
        let d = Decomposition {
            host,
            pieces: vec![Piece { kind: PieceKind::Cycle, graph: t1 }, Piece { kind: PieceKind::Cycle, graph: t2 }],
        };
        let rep = verify_decomposition(&d);
        assert!(!rep.edge_disjoint);
        assert!(!rep.covers);
        let mut d = walecki(6).unwrap();
        let g = &d.pieces[0].graph;
        d.pieces[0].graph = g.edge_subgraph(1..g.edge_count());
        let rep = verify_decomposition(&d);
        assert!(rep.edge_disjoint && !rep.covers);
    }
}
