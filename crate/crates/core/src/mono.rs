//! Monochromatic copies of a pattern in an edge coloring.
//!
//! [`find_monochromatic`] dispatches on the shape of the pattern: stars use
//! a color-degree threshold, matchings use exact blossom matching per color
//! class, cliques use a clique search per color class. Anything else goes
//! through [`find_monochromatic_generic`], a backtracking embedding search
//! that is also the reference the fast paths are tested against.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, EdgeColoring};
use crate::hypergraph::{combinations, GraphError, Hypergraph};
use crate::matching::maximum_matching_sparse;

/// Structural class of a pattern, ignoring isolated vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternShape {
    /// No edges at all.
    Empty,
    /// K_r^{(ℓ)} on its covered vertices.
    Clique {
        order: usize,
    },
    /// K_{1,r} with the given center.
    Star {
        leaves: usize,
        center: usize,
    },
    /// r pairwise disjoint edges.
    Matching {
        size: usize,
    },
    General,
}

impl PatternShape {
    pub fn of(pattern: &Hypergraph) -> PatternShape {
        let e = pattern.edge_count();
        if e == 0 {
            return PatternShape::Empty;
        }
        let covered = pattern.covered_vertices();
        let l = pattern.uniformity();
        if binomial(covered.len(), l) == e as u128 {
            return PatternShape::Clique { order: covered.len() };
        }
        if l == 2 {
            let deg = pattern.degrees();
            if let Some(center) = (0..pattern.vertex_count()).find(|&v| deg[v] == e) {
                return PatternShape::Star { leaves: e, center };
            }
            if deg.iter().all(|&d| d <= 1) {
                return PatternShape::Matching { size: e };
            }
        }
        PatternShape::General
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// An injective vertex map sending every pattern edge to a host edge of one
/// color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub pattern: Hypergraph,
    pub vertex_map: Vec<usize>,
    pub color: Color,
}

impl Embedding {
    /// Re-checks injectivity and the color of every image edge.
    pub fn verify(&self, coloring: &EdgeColoring) -> bool {
        let host = coloring.host();
        if self.vertex_map.len() != self.pattern.vertex_count() {
            return false;
        }
        let mut seen = vec![false; host.vertex_count()];
        for &v in &self.vertex_map {
            if v >= host.vertex_count() || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        self.pattern.edges().iter().all(|e| {
            let image: Vec<usize> = e.iter().map(|&v| self.vertex_map[v]).collect();
            coloring.color_of(&image) == Some(self.color)
        })
    }
}

fn check_uniformity(pattern: &Hypergraph, coloring: &EdgeColoring) -> Result<(), GraphError> {
    let host = coloring.host().uniformity();
    if pattern.uniformity() != host {
        return Err(GraphError::UniformityMismatch { pattern: pattern.uniformity(), host });
    }
    Ok(())
}

/// Fills in images for pattern vertices left unmapped (isolated ones).
fn complete_map(partial: &[Option<usize>], host_n: usize) -> Option<Vec<usize>> {
    let mut used = vec![false; host_n];
    for v in partial.iter().flatten() {
        used[*v] = true;
    }
    let mut free = (0..host_n).filter(|&v| !used[v]);
    partial.iter().map(|m| m.or_else(|| free.next())).collect()
}

fn color_classes(coloring: &EdgeColoring) -> BTreeMap<Color, Vec<usize>> {
    let mut classes: BTreeMap<Color, Vec<usize>> = BTreeMap::new();
    for (i, &c) in coloring.colors().iter().enumerate() {
        classes.entry(c).or_default().push(i);
    }
    classes
}

/// Finds a monochromatic copy of `pattern`, using the specialized detector
/// for stars, matchings and cliques.
pub fn find_monochromatic(pattern: &Hypergraph, coloring: &EdgeColoring) -> Result<Option<Embedding>, GraphError> {
    check_uniformity(pattern, coloring)?;
    if pattern.vertex_count() > coloring.host().vertex_count() {
        return Ok(None);
    }
    let found = match PatternShape::of(pattern) {
        PatternShape::Empty => {
            Some((vec![None; pattern.vertex_count()], coloring.colors().first().copied().unwrap_or(0)))
        }
        PatternShape::Star { leaves, center } => star_copy(pattern, coloring, leaves, center),
        PatternShape::Matching { size } => matching_copy(pattern, coloring, size),
        PatternShape::Clique { order } => clique_copy(pattern, coloring, order),
        PatternShape::General => return find_monochromatic_generic(pattern, coloring),
    };
    Ok(found.and_then(|(partial, color)| {
        complete_map(&partial, coloring.host().vertex_count()).map(|vertex_map| Embedding {
            pattern: pattern.clone(),
            vertex_map,
            color,
        })
    }))
}

type Partial = (Vec<Option<usize>>, Color);

fn star_copy(pattern: &Hypergraph, coloring: &EdgeColoring, leaves: usize, center: usize) -> Option<Partial> {
    let host = coloring.host();
    let mut at: HashMap<(usize, Color), Vec<usize>> = HashMap::new();
    for (e, &c) in host.edges().iter().zip(coloring.colors()) {
        at.entry((e[0], c)).or_default().push(e[1]);
        at.entry((e[1], c)).or_default().push(e[0]);
    }
    let mut hits: Vec<(&(usize, Color), &Vec<usize>)> = at.iter().filter(|(_, nb)| nb.len() >= leaves).collect();
    hits.sort();
    let (&(v, c), nbrs) = hits.first()?;
    let mut partial = vec![None; pattern.vertex_count()];
    partial[center] = Some(v);
    let mut nb: Vec<usize> = (*nbrs).clone();
    nb.sort_unstable();
    for (e, &w) in pattern.edges().iter().zip(&nb) {
        let leaf = if e[0] == center { e[1] } else { e[0] };
        partial[leaf] = Some(w);
    }
    Some((partial, c))
}

fn matching_copy(pattern: &Hypergraph, coloring: &EdgeColoring, size: usize) -> Option<Partial> {
    let host = coloring.host();
    for (c, class) in color_classes(coloring) {
        if class.len() < size {
            continue;
        }
        let edges: Vec<(usize, usize)> = class.iter().map(|&i| (host.edge(i)[0], host.edge(i)[1])).collect();
        let m = maximum_matching_sparse(&edges, size);
        if m.len() >= size {
            let mut partial = vec![None; pattern.vertex_count()];
            for (pe, &(a, b)) in pattern.edges().iter().zip(&m) {
                partial[pe[0]] = Some(a);
                partial[pe[1]] = Some(b);
            }
            return Some((partial, c));
        }
    }
    None
}

/// Dense bitset rows for per-color adjacency.
struct BitRows {
    words: usize,
    bits: Vec<u64>,
}

impl BitRows {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitRows { words, bits: vec![0; words * n] }
    }
    fn set(&mut self, a: usize, b: usize) {
        self.bits[a * self.words + b / 64] |= 1 << (b % 64);
    }
    fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }
}

fn clique_copy(pattern: &Hypergraph, coloring: &EdgeColoring, order: usize) -> Option<Partial> {
    let host = coloring.host();
    let l = host.uniformity();
    let covered = pattern.covered_vertices();
    for (c, class) in color_classes(coloring) {
        if (class.len() as u128) < binomial(order, l) {
            continue;
        }
        let found = if l == 2 {
            let n = host.vertex_count();
            let mut rows = BitRows::new(n);
            let mut deg = vec![0usize; n];
            for &i in &class {
                let e = host.edge(i);
                rows.set(e[0], e[1]);
                rows.set(e[1], e[0]);
                deg[e[0]] += 1;
                deg[e[1]] += 1;
            }
            let cands: Vec<usize> = (0..n).filter(|&v| deg[v] + 1 >= order).collect();
            let mut chosen = Vec::with_capacity(order);
            graph_clique(&rows, &cands, order, &mut chosen).then_some(chosen)
        } else {
            let mut touched = vec![false; host.vertex_count()];
            for &i in &class {
                for &v in host.edge(i).iter() {
                    touched[v] = true;
                }
            }
            let cands: Vec<usize> = (0..host.vertex_count()).filter(|&v| touched[v]).collect();
            let mut chosen = Vec::with_capacity(order);
            let is_c = |vs: &[usize]| coloring.color_of(vs) == Some(c);
            hyper_clique(&cands, 0, order, l, &is_c, &mut chosen).then_some(chosen)
        };
        if let Some(chosen) = found {
            let mut partial = vec![None; pattern.vertex_count()];
            for (&pv, &hv) in covered.iter().zip(&chosen) {
                partial[pv] = Some(hv);
            }
            return Some((partial, c));
        }
    }
    None
}

fn graph_clique(rows: &BitRows, cands: &[usize], need: usize, chosen: &mut Vec<usize>) -> bool {
    if need == 0 {
        return true;
    }
    if cands.len() < need {
        return false;
    }
    for (i, &v) in cands.iter().enumerate() {
        if cands.len() - i < need {
            break;
        }
        let next: Vec<usize> = cands[i + 1..].iter().copied().filter(|&w| rows.get(v, w)).collect();
        chosen.push(v);
        if graph_clique(rows, &next, need - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn hyper_clique(
    cands: &[usize],
    from: usize,
    need: usize,
    l: usize,
    is_c: &dyn Fn(&[usize]) -> bool,
    chosen: &mut Vec<usize>,
) -> bool {
    if need == 0 {
        return true;
    }
    for i in from..cands.len() {
        if cands.len() - i < need {
            break;
        }
        let u = cands[i];
        let ok = chosen.len() + 1 < l
            || combinations(chosen.len(), l - 1).iter().all(|sub| {
                let mut vs: Vec<usize> = sub.iter().map(|&j| chosen[j]).collect();
                vs.push(u);
                is_c(&vs)
            });
        if ok {
            chosen.push(u);
            if hyper_clique(cands, i + 1, need - 1, l, is_c, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Order in which pattern vertices are mapped: most-connected first.
fn search_order(pattern: &Hypergraph) -> Vec<usize> {
    let covered = pattern.covered_vertices();
    let deg = pattern.degrees();
    let mut order: Vec<usize> = Vec::with_capacity(covered.len());
    let mut placed = vec![false; pattern.vertex_count()];
    while order.len() < covered.len() {
        let best = covered
            .iter()
            .copied()
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = pattern.edges().iter().filter(|e| e.contains(v) && e.iter().any(|&w| placed[w])).count();
                (links, deg[v], std::cmp::Reverse(v))
            })
            .expect("unplaced vertex");
        placed[best] = true;
        order.push(best);
    }
    order
}

/// Backtracking embedding search over every color class. Handles any
/// pattern; used as the reference for the specialized detectors.
pub fn find_monochromatic_generic(
    pattern: &Hypergraph,
    coloring: &EdgeColoring,
) -> Result<Option<Embedding>, GraphError> {
    check_uniformity(pattern, coloring)?;
    let host = coloring.host();
    if pattern.vertex_count() > host.vertex_count() {
        return Ok(None);
    }
    if pattern.edge_count() == 0 {
        let vertex_map = (0..pattern.vertex_count()).collect();
        let color = coloring.colors().first().copied().unwrap_or(0);
        return Ok(Some(Embedding { pattern: pattern.clone(), vertex_map, color }));
    }
    let order = search_order(pattern);
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // edges to check once the vertex at each position is mapped
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for (ei, e) in pattern.edges().iter().enumerate() {
        let last = e.iter().map(|v| pos[v]).max().expect("nonempty edge");
        checks[last].push(ei);
    }
    for (c, class) in color_classes(coloring) {
        if class.len() < pattern.edge_count() {
            continue;
        }
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); host.vertex_count()];
        for &i in &class {
            let e = host.edge(i);
            for &a in e.iter() {
                for &b in e.iter() {
                    if a != b {
                        nbrs[a].push(b);
                    }
                }
            }
        }
        for list in nbrs.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        let active: Vec<usize> = (0..host.vertex_count()).filter(|&v| !nbrs[v].is_empty()).collect();
        let mut map = vec![None; pattern.vertex_count()];
        let mut used = vec![false; host.vertex_count()];
        let ctx =
            GenericCtx { pattern, coloring, color: c, order: &order, checks: &checks, nbrs: &nbrs, active: &active };
        if ctx.extend(0, &mut map, &mut used) {
            let vertex_map = complete_map(&map, host.vertex_count()).expect("enough host vertices");
            return Ok(Some(Embedding { pattern: pattern.clone(), vertex_map, color: c }));
        }
    }
    Ok(None)
}

struct GenericCtx<'a> {
    pattern: &'a Hypergraph,
    coloring: &'a EdgeColoring,
    color: Color,
    order: &'a [usize],
    checks: &'a [Vec<usize>],
    nbrs: &'a [Vec<usize>],
    active: &'a [usize],
}

impl GenericCtx<'_> {
    fn extend(&self, depth: usize, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let pv = self.order[depth];
        // candidates: neighbors of an already-mapped pattern neighbor
        let anchor = self
            .pattern
            .edges()
            .iter()
            .filter(|e| e.contains(pv))
            .flat_map(|e| e.iter().copied())
            .find_map(|w| if w != pv { map[w] } else { None });
        let cands: &[usize] = match anchor {
            Some(h) => &self.nbrs[h],
            None => self.active,
        };
        for &hv in cands {
            if used[hv] {
                continue;
            }
            map[pv] = Some(hv);
            let ok = self.checks[depth].iter().all(|&ei| {
                let image: Vec<usize> = self.pattern.edge(ei).iter().map(|&v| map[v].expect("mapped")).collect();
                self.coloring.color_of(&image) == Some(self.color)
            });
            if ok {
                used[hv] = true;
                if self.extend(depth + 1, map, used) {
                    return true;
                }
                used[hv] = false;
            }
            map[pv] = None;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{complete_hypergraph, families};
    use std::sync::Arc;

    fn k(n: usize) -> Arc<Hypergraph> {
        Arc::new(complete_hypergraph(n, 2).unwrap())
    }

    #[test]
    fn shapes() {
        assert_eq!(PatternShape::of(&families::star(3)), PatternShape::Star { leaves: 3, center: 0 });
        assert_eq!(PatternShape::of(&families::matching(2)), PatternShape::Matching { size: 2 });
        assert_eq!(PatternShape::of(&families::clique(4, 2).unwrap()), PatternShape::Clique { order: 4 });
        assert_eq!(PatternShape::of(&families::clique(4, 3).unwrap()), PatternShape::Clique { order: 4 });
        assert_eq!(PatternShape::of(&families::cycle(4)), PatternShape::General);
        assert_eq!(PatternShape::of(&families::star(1)), PatternShape::Clique { order: 2 });
    }

    #[test]
    fn cherry_in_monochromatic_triangle() {
        let c = EdgeColoring::constant(k(3), 1);
        let emb = find_monochromatic(&families::star(2), &c).unwrap().unwrap();
        assert!(emb.verify(&c));
        assert_eq!(emb.color, 1);
    }

    #[test]
    fn no_two_disjoint_edges_in_triangle() {
        let c = EdgeColoring::constant(k(3), 0);
        assert!(find_monochromatic(&families::matching(2), &c).unwrap().is_none());
        assert!(find_monochromatic_generic(&families::matching(2), &c).unwrap().is_none());
    }

    #[test]
    fn two_pentagons_have_no_triangle() {
        let host = k(5);
        let colors = host
            .edges()
            .iter()
            .map(|e| {
                let d = (e[1] - e[0]).min(5 - (e[1] - e[0]));
                d as Color
            })
            .collect();
        let c = EdgeColoring::new(host, colors).unwrap();
        let k3 = families::clique(3, 2).unwrap();
        assert!(find_monochromatic(&k3, &c).unwrap().is_none());
        assert!(find_monochromatic_generic(&k3, &c).unwrap().is_none());
        // each color class is a 5-cycle, which has a cherry
        assert!(find_monochromatic(&families::star(2), &c).unwrap().is_some());
    }

    #[test]
    fn uniformity_mismatch() {
        let c = EdgeColoring::constant(k(4), 0);
        let err = find_monochromatic(&families::clique(3, 3).unwrap(), &c).unwrap_err();
        assert_eq!(err, GraphError::UniformityMismatch { pattern: 3, host: 2 });
    }

    #[test]
    fn hypergraph_clique() {
        let host = Arc::new(complete_hypergraph(5, 3).unwrap());
        let c = EdgeColoring::constant(host.clone(), 2);
        let k4 = families::clique(4, 3).unwrap();
        let emb = find_monochromatic(&k4, &c).unwrap().unwrap();
        assert!(emb.verify(&c));
        // color one triple of every 4-set differently: {0,1,2},{0,3,4},{1,3,4}... use vertex 0 triples
        let colors = host.edges().iter().map(|e| if e.contains(0) { 1 } else { 2 }).collect();
        let c = EdgeColoring::new(host, colors).unwrap();
        // {1,2,3,4} is a color-2 K_4^{(3)}
        let emb = find_monochromatic(&k4, &c).unwrap().unwrap();
        assert_eq!(emb.color, 2);
        assert!(emb.verify(&c));
    }

    #[test]
    fn isolated_pattern_vertices_need_room() {
        let padded = families::star(2).with_vertex_count(5).unwrap();
        let c = EdgeColoring::constant(k(4), 0);
        assert!(find_monochromatic(&padded, &c).unwrap().is_none());
        let c = EdgeColoring::constant(k(5), 0);
        let emb = find_monochromatic(&padded, &c).unwrap().unwrap();
        assert!(emb.verify(&c));
    }
}
