//! Maximum cardinality matching in general graphs (Edmonds' blossom
//! algorithm, augmenting-path form).

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::coloring::{Color, EdgeColoring};
use crate::hypergraph::GraphError;

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        Blossom {
            adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lowest_common_ancestor(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Grows an alternating tree from `root`; returns the free endpoint of an
    /// augmenting path if one exists.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lowest_common_ancestor(v, to);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }

    fn solve(mut self, limit: usize) -> Vec<usize> {
        let n = self.adj.len();
        let mut size = 0;
        // greedy start
        for v in 0..n {
            if self.mate[v] == NONE {
                if let Some(&u) = self.adj[v].iter().find(|&&u| self.mate[u] == NONE && u != v) {
                    self.mate[v] = u;
                    self.mate[u] = v;
                    size += 1;
                }
            }
        }
        for v in 0..n {
            if size >= limit {
                break;
            }
            if self.mate[v] == NONE {
                if let Some(end) = self.find_path(v) {
                    self.augment(end);
                    size += 1;
                }
            }
        }
        self.mate
    }
}

/// A maximum matching of the graph on `0..n` with the given edges, as
/// vertex pairs `(a, b)` with `a < b`, sorted.
pub fn maximum_matching(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    matching_up_to(n, edges, usize::MAX)
}

/// A matching that is maximum, or has at least `limit` edges if the graph
/// admits that many; the search stops early once `limit` is reached.
pub fn matching_up_to(n: usize, edges: &[(usize, usize)], limit: usize) -> Vec<(usize, usize)> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mate = Blossom::new(&adj).solve(limit);
    let mut out: Vec<(usize, usize)> =
        (0..n).filter(|&v| mate[v] != NONE && v < mate[v]).map(|v| (v, mate[v])).collect();
    out.sort_unstable();
    out
}

/// Maximum matching of a sparse edge set on arbitrary vertex labels:
/// vertices are compressed first so cost depends only on touched vertices.
pub fn maximum_matching_sparse(edges: &[(usize, usize)], limit: usize) -> Vec<(usize, usize)> {
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut local = Vec::with_capacity(edges.len());
    for &(a, b) in edges {
        let mut id = |v: usize| {
            *ids.entry(v).or_insert_with(|| {
                labels.push(v);
                labels.len() - 1
            })
        };
        let (ia, ib) = (id(a), id(b));
        local.push((ia, ib));
    }
    let mut out: Vec<(usize, usize)> = matching_up_to(labels.len(), &local, limit)
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (labels[a], labels[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    out.sort_unstable();
    out
}

fn class_edges(coloring: &EdgeColoring) -> Result<BTreeMap<Color, Vec<(usize, usize)>>, GraphError> {
    let host = coloring.host();
    if host.uniformity() != 2 {
        return Err(GraphError::NotAGraph(host.uniformity()));
    }
    let mut classes: BTreeMap<Color, Vec<(usize, usize)>> = BTreeMap::new();
    for (e, &c) in host.edges().iter().zip(coloring.colors()) {
        classes.entry(c).or_default().push((e[0], e[1]));
    }
    Ok(classes)
}

/// Exact maximum matching size of every color class in use. Colors absent
/// from the coloring have matching size 0 and are not listed.
pub fn max_matching_per_color(coloring: &EdgeColoring) -> Result<BTreeMap<Color, usize>, GraphError> {
    Ok(class_edges(coloring)?
        .into_iter()
        .map(|(c, edges)| (c, maximum_matching_sparse(&edges, usize::MAX).len()))
        .collect())
}

/// Maximum matching of a single color class (empty class gives 0).
pub fn max_matching_of_color(coloring: &EdgeColoring, color: Color) -> Result<usize, GraphError> {
    let mut classes = class_edges(coloring)?;
    Ok(classes.remove(&color).map_or(0, |edges| maximum_matching_sparse(&edges, usize::MAX).len()))
}
