//! Edge colorings and list assignments on a shared host.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::hypergraph::{Edge, GraphError, Hypergraph};

/// Colors are opaque non-negative labels.
pub type Color = u32;

fn same_host(a: &Arc<Hypergraph>, b: &Arc<Hypergraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A color for every host edge, indexed like [`Hypergraph::edges`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    host: Arc<Hypergraph>,
    colors: Vec<Color>,
}

impl EdgeColoring {
    pub fn new(host: Arc<Hypergraph>, colors: Vec<Color>) -> Result<Self, GraphError> {
        if colors.len() != host.edge_count() {
            return Err(GraphError::LengthMismatch { what: "colors", expected: host.edge_count(), got: colors.len() });
        }
        Ok(EdgeColoring { host, colors })
    }

    /// Every edge gets `color`.
    pub fn constant(host: Arc<Hypergraph>, color: Color) -> Self {
        let colors = vec![color; host.edge_count()];
        EdgeColoring { host, colors }
    }

    pub fn host(&self) -> &Hypergraph {
        &self.host
    }

    pub fn host_arc(&self) -> &Arc<Hypergraph> {
        &self.host
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn color(&self, edge: usize) -> Color {
        self.colors[edge]
    }

    pub fn color_of(&self, vertices: &[usize]) -> Option<Color> {
        self.host.index_of(vertices).map(|i| self.colors[i])
    }

    /// Distinct colors in use, ascending.
    pub fn palette(&self) -> Vec<Color> {
        let set: BTreeSet<Color> = self.colors.iter().copied().collect();
        set.into_iter().collect()
    }

    /// Edge indices holding `color`.
    pub fn class(&self, color: Color) -> Vec<usize> {
        (0..self.colors.len()).filter(|&i| self.colors[i] == color).collect()
    }

    pub fn set_color(&mut self, edge: usize, color: Color) {
        self.colors[edge] = color;
    }

    /// Largest number of same-colored edges at a single vertex.
    pub fn max_color_degree(&self) -> usize {
        let mut counts: std::collections::HashMap<(usize, Color), usize> = std::collections::HashMap::new();
        for (e, &c) in self.host.edges().iter().zip(&self.colors) {
            for &v in e.iter() {
                *counts.entry((v, c)).or_default() += 1;
            }
        }
        counts.into_values().max().unwrap_or(0)
    }

    /// True when no two edges sharing a vertex share a color.
    pub fn is_proper(&self) -> bool {
        self.max_color_degree() <= 1
    }
}

/// A list of exactly `k` distinct colors on every host edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListAssignment {
    host: Arc<Hypergraph>,
    k: usize,
    lists: Vec<Vec<Color>>,
}

impl ListAssignment {
    /// Lists are sorted; each must hold exactly `k` distinct colors.
    pub fn new(host: Arc<Hypergraph>, k: usize, lists: Vec<Vec<Color>>) -> Result<Self, GraphError> {
        if k == 0 {
            return Err(GraphError::ZeroListSize);
        }
        if lists.len() != host.edge_count() {
            return Err(GraphError::LengthMismatch { what: "lists", expected: host.edge_count(), got: lists.len() });
        }
        let mut sorted = Vec::with_capacity(lists.len());
        for (i, mut list) in lists.into_iter().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.len() != k {
                return Err(GraphError::WrongListSize { edge: host.edge(i).to_vec(), got: list.len(), expected: k });
            }
            sorted.push(list);
        }
        Ok(ListAssignment { host, k, lists: sorted })
    }

    /// The same list `{0, …, k-1}` on every edge.
    pub fn uniform(host: Arc<Hypergraph>, k: usize) -> Self {
        let lists = vec![(0..k as Color).collect(); host.edge_count()];
        ListAssignment { host, k, lists }
    }

    pub fn host(&self) -> &Hypergraph {
        &self.host
    }

    pub fn host_arc(&self) -> &Arc<Hypergraph> {
        &self.host
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lists(&self) -> &[Vec<Color>] {
        &self.lists
    }

    pub fn list(&self, edge: usize) -> &[Color] {
        &self.lists[edge]
    }

    /// Union of all lists, ascending.
    pub fn universe(&self) -> Vec<Color> {
        let set: BTreeSet<Color> = self.lists.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// Number of distinct lists.
    pub fn distinct_lists(&self) -> usize {
        self.lists.iter().collect::<BTreeSet<_>>().len()
    }

    /// Restriction to a spanning subgraph of the host.
    pub fn restrict(&self, sub: &Arc<Hypergraph>) -> Result<ListAssignment, GraphError> {
        if !sub.is_spanning_subgraph_of(&self.host) {
            return Err(GraphError::HostMismatch);
        }
        let lists =
            sub.edges().iter().map(|e| self.lists[self.host.index_of(e).expect("checked subgraph")].clone()).collect();
        Ok(ListAssignment { host: sub.clone(), k: self.k, lists })
    }

    /// Extends to a larger host: edges already present keep their list,
    /// new edges get `{0, …, k-1}`.
    pub fn pad_to(&self, bigger: Arc<Hypergraph>) -> Result<ListAssignment, GraphError> {
        if self.host.uniformity() != bigger.uniformity() {
            return Err(GraphError::HostMismatch);
        }
        if !self.host.edges().iter().all(|e| bigger.contains_edge(e)) {
            return Err(GraphError::HostMismatch);
        }
        let lists = bigger
            .edges()
            .iter()
            .map(|e| match self.host.index_of(e) {
                Some(i) => self.lists[i].clone(),
                None => (0..self.k as Color).collect(),
            })
            .collect();
        Ok(ListAssignment { host: bigger, k: self.k, lists })
    }

    /// The coloring that picks the smallest color of every list.
    pub fn first_choice(&self) -> EdgeColoring {
        EdgeColoring { host: self.host.clone(), colors: self.lists.iter().map(|l| l[0]).collect() }
    }
}

/// True iff `c(e) ∈ L_e` for every edge.
pub fn verify_list_coloring(lists: &ListAssignment, coloring: &EdgeColoring) -> Result<bool, GraphError> {
    if !same_host(&lists.host, &coloring.host) {
        return Err(GraphError::HostMismatch);
    }
    Ok(lists.lists.iter().zip(&coloring.colors).all(|(l, c)| l.binary_search(c).is_ok()))
}

#[derive(Serialize)]
struct ColoringView<'a> {
    uniformity: usize,
    n: usize,
    edges: &'a [Edge],
    colors: &'a [Color],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ColoringRaw {
    uniformity: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
    colors: Vec<Color>,
}

#[derive(Serialize)]
struct ListsView<'a> {
    uniformity: usize,
    n: usize,
    edges: &'a [Edge],
    k: usize,
    lists: &'a [Vec<Color>],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ListsRaw {
    uniformity: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
    k: usize,
    lists: Vec<Vec<Color>>,
}

/// Re-associates per-edge data after the host sorts its edges.
fn align<T: Clone>(host: &Hypergraph, edges: &[Vec<usize>], data: Vec<T>) -> Vec<T> {
    let mut out: Vec<Option<T>> = vec![None; host.edge_count()];
    for (e, d) in edges.iter().zip(data) {
        let i = host.index_of(e).expect("edge of host");
        out[i] = Some(d);
    }
    out.into_iter().map(|d| d.expect("every edge listed once")).collect()
}

impl Serialize for EdgeColoring {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ColoringView {
            uniformity: self.host.uniformity(),
            n: self.host.vertex_count(),
            edges: self.host.edges(),
            colors: &self.colors,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeColoring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = ColoringRaw::deserialize(d)?;
        if raw.colors.len() != raw.edges.len() {
            return Err(D::Error::custom("colors and edges differ in length"));
        }
        let host = Hypergraph::new(raw.uniformity, raw.n, raw.edges.clone()).map_err(D::Error::custom)?;
        let colors = align(&host, &raw.edges, raw.colors);
        EdgeColoring::new(Arc::new(host), colors).map_err(D::Error::custom)
    }
}

impl Serialize for ListAssignment {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ListsView {
            uniformity: self.host.uniformity(),
            n: self.host.vertex_count(),
            edges: self.host.edges(),
            k: self.k,
            lists: &self.lists,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ListAssignment {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = ListsRaw::deserialize(d)?;
        if raw.lists.len() != raw.edges.len() {
            return Err(D::Error::custom("lists and edges differ in length"));
        }
        let host = Hypergraph::new(raw.uniformity, raw.n, raw.edges.clone()).map_err(D::Error::custom)?;
        let lists = align(&host, &raw.edges, raw.lists);
        ListAssignment::new(Arc::new(host), raw.k, lists).map_err(D::Error::custom)
    }
}
