//! Uniform hypergraphs on the vertex set `0..n`.
//!
//! A [`Hypergraph`] keeps its edges canonically ordered: vertices sorted
//! inside each edge and edges sorted lexicographically. Edge identity is the
//! sorted vertex tuple, so the position of an edge in [`Hypergraph::edges`]
//! is a stable index shared by list assignments and colorings on that host.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Errors raised when building or combining hypergraphs and colorings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("uniformity must be positive")]
    ZeroUniformity,
    #[error("edge {edge:?} has {got} vertices, expected {expected}")]
    WrongArity { edge: Vec<usize>, got: usize, expected: usize },
    #[error("edge {edge:?} repeats a vertex")]
    RepeatedVertex { edge: Vec<usize> },
    #[error("edge {edge:?} leaves the vertex range 0..{n}")]
    VertexOutOfRange { edge: Vec<usize>, n: usize },
    #[error("duplicate edge {edge:?}")]
    DuplicateEdge { edge: Vec<usize> },
    #[error("uniformity mismatch: pattern is {pattern}-uniform, host is {host}-uniform")]
    UniformityMismatch { pattern: usize, host: usize },
    #[error("objects live on different hosts")]
    HostMismatch,
    #[error("{what}: expected {expected} entries, got {got}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("list of edge {edge:?} has {got} distinct colors, expected {expected}")]
    WrongListSize { edge: Vec<usize>, got: usize, expected: usize },
    #[error("operation requires a graph (uniformity 2), got uniformity {0}")]
    NotAGraph(usize),
    #[error("list size must be positive")]
    ZeroListSize,
}

/// A sorted tuple of distinct vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(Vec<usize>);

impl Edge {
    /// Builds an edge, sorting the vertices. Does not check distinctness.
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        Edge(vertices)
    }

    pub fn pair(a: usize, b: usize) -> Self {
        if a <= b {
            Edge(vec![a, b])
        } else {
            Edge(vec![b, a])
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl Deref for Edge {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Serialize for Edge {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Edge::new(Vec::<usize>::deserialize(d)?))
    }
}

/// An ℓ-uniform hypergraph on `0..n`.
#[derive(Clone)]
pub struct Hypergraph {
    uniformity: usize,
    n: usize,
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
}

impl Hypergraph {
    /// Validates and canonicalizes an edge list.
    pub fn new(uniformity: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        if uniformity == 0 {
            return Err(GraphError::ZeroUniformity);
        }
        let mut canon = Vec::with_capacity(edges.len());
        for raw in edges {
            if raw.len() != uniformity {
                return Err(GraphError::WrongArity { got: raw.len(), expected: uniformity, edge: raw });
            }
            let e = Edge::new(raw);
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(GraphError::RepeatedVertex { edge: e.into_vec() });
            }
            if e.last().is_some_and(|&v| v >= n) {
                return Err(GraphError::VertexOutOfRange { edge: e.into_vec(), n });
            }
            canon.push(e);
        }
        canon.sort();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge { edge: w[0].to_vec() });
        }
        Ok(Self::from_sorted(uniformity, n, canon))
    }

    fn from_sorted(uniformity: usize, n: usize, edges: Vec<Edge>) -> Self {
        let index = edges.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Hypergraph { uniformity, n, edges, index }
    }

    /// The empty ℓ-graph on `n` vertices.
    pub fn empty(uniformity: usize, n: usize) -> Result<Self, GraphError> {
        Self::new(uniformity, n, Vec::new())
    }

    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    /// Index of the edge with the given (not necessarily sorted) vertices.
    pub fn index_of(&self, vertices: &[usize]) -> Option<usize> {
        if vertices.len() != self.uniformity {
            return None;
        }
        let mut v = vertices.to_vec();
        v.sort_unstable();
        self.index.get(&Edge(v)).copied()
    }

    pub fn contains_edge(&self, vertices: &[usize]) -> bool {
        self.index_of(vertices).is_some()
    }

    /// Vertices that lie in at least one edge, ascending.
    pub fn covered_vertices(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        for e in &self.edges {
            for &v in e.iter() {
                seen[v] = true;
            }
        }
        (0..self.n).filter(|&v| seen[v]).collect()
    }

    /// Degree of every vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e.iter() {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Sub-hypergraph on the same vertex set with the selected edges.
    pub fn edge_subgraph(&self, edge_indices: impl IntoIterator<Item = usize>) -> Hypergraph {
        let mut edges: Vec<Edge> = edge_indices.into_iter().map(|i| self.edges[i].clone()).collect();
        edges.sort();
        edges.dedup();
        Self::from_sorted(self.uniformity, self.n, edges)
    }

    /// True when every edge of `self` is an edge of `other` and the vertex
    /// sets agree.
    pub fn is_spanning_subgraph_of(&self, other: &Hypergraph) -> bool {
        self.uniformity == other.uniformity
            && self.n == other.n
            && self.edges.iter().all(|e| other.index.contains_key(e))
    }

    /// Same hypergraph with `extra` isolated vertices appended.
    pub fn with_vertex_count(&self, n: usize) -> Result<Hypergraph, GraphError> {
        if let Some(e) = self.edges.iter().find(|e| e.last().is_some_and(|&v| v >= n)) {
            return Err(GraphError::VertexOutOfRange { edge: e.to_vec(), n });
        }
        Ok(Self::from_sorted(self.uniformity, n, self.edges.clone()))
    }

    /// Adjacency lists; only meaningful for graphs.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            for &a in e.iter() {
                for &b in e.iter() {
                    if a != b {
                        adj[a].push(b);
                    }
                }
            }
        }
        adj
    }
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.uniformity == other.uniformity && self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("uniformity", &self.uniformity)
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

#[derive(Serialize)]
struct HypergraphView<'a> {
    uniformity: usize,
    n: usize,
    edges: &'a [Edge],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphRaw {
    uniformity: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Serialize for Hypergraph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HypergraphView { uniformity: self.uniformity, n: self.n, edges: &self.edges }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = HypergraphRaw::deserialize(d)?;
        Hypergraph::new(raw.uniformity, raw.n, raw.edges).map_err(serde::de::Error::custom)
    }
}

/// All ℓ-subsets of `0..n`, lexicographically ordered.
pub fn complete_hypergraph(n: usize, uniformity: usize) -> Result<Hypergraph, GraphError> {
    if uniformity == 0 {
        return Err(GraphError::ZeroUniformity);
    }
    let edges = combinations(n, uniformity).into_iter().map(Edge).collect();
    Ok(Hypergraph::from_sorted(uniformity, n, edges))
}

/// Lexicographically ordered `k`-subsets of `0..n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Named pattern families.
pub mod families {
    use super::*;

    /// Star K_{1,r}: center 0, leaves 1..=r.
    pub fn star(r: usize) -> Hypergraph {
        Hypergraph::new(2, r + 1, (1..=r).map(|v| vec![0, v]).collect()).expect("valid star")
    }

    /// Matching rK_2 on 2r vertices.
    pub fn matching(r: usize) -> Hypergraph {
        Hypergraph::new(2, 2 * r, (0..r).map(|i| vec![2 * i, 2 * i + 1]).collect()).expect("valid matching")
    }

    /// Clique K_r^{(ℓ)}.
    pub fn clique(r: usize, uniformity: usize) -> Result<Hypergraph, GraphError> {
        complete_hypergraph(r, uniformity)
    }

    /// Cycle C_m on 0..m in order.
    pub fn cycle(m: usize) -> Hypergraph {
        Hypergraph::new(2, m, (0..m).map(|i| vec![i, (i + 1) % m]).collect()).expect("valid cycle")
    }

    /// Path with `edges` edges.
    pub fn path(edges: usize) -> Hypergraph {
        Hypergraph::new(2, edges + 1, (0..edges).map(|i| vec![i, i + 1]).collect()).expect("valid path")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let k3 = complete_hypergraph(3, 2).unwrap();
        assert_eq!(k3.edges().iter().map(|e| e.to_vec()).collect::<Vec<_>>(), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn too_few_vertices_gives_empty_edge_set() {
        let h = complete_hypergraph(2, 3).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn k4_has_six_edges() {
        assert_eq!(complete_hypergraph(4, 2).unwrap().edge_count(), 6);
        assert_eq!(complete_hypergraph(6, 3).unwrap().edge_count(), 20);
    }

    #[test]
    fn zero_uniformity_rejected() {
        assert_eq!(complete_hypergraph(3, 0).unwrap_err(), GraphError::ZeroUniformity);
    }

    #[test]
    fn validation() {
        assert!(matches!(Hypergraph::new(2, 3, vec![vec![0, 0]]), Err(GraphError::RepeatedVertex { .. })));
        assert!(matches!(Hypergraph::new(2, 3, vec![vec![0, 3]]), Err(GraphError::VertexOutOfRange { .. })));
        assert!(matches!(Hypergraph::new(2, 3, vec![vec![0, 1], vec![1, 0]]), Err(GraphError::DuplicateEdge { .. })));
        assert!(matches!(Hypergraph::new(3, 3, vec![vec![0, 1]]), Err(GraphError::WrongArity { .. })));
    }

    #[test]
    fn index_lookup_is_order_free() {
        let h = complete_hypergraph(5, 3).unwrap();
        let i = h.index_of(&[4, 0, 2]).unwrap();
        assert_eq!(h.edge(i).to_vec(), vec![0, 2, 4]);
        assert_eq!(h.index_of(&[0, 1]), None);
    }

    #[test]
    fn serde_round_trip() {
        let h = families::cycle(5);
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(text, r#"{"uniformity":2,"n":5,"edges":[[0,1],[0,4],[1,2],[2,3],[3,4]]}"#);
        let back: Hypergraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(6, 3).len(), 20);
        assert_eq!(combinations(4, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
