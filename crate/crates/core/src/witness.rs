//! Constructive lower-bound witnesses: list colorings with no monochromatic
//! target, built for any list assignment.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{verify_list_coloring, Color, EdgeColoring, ListAssignment};
use crate::decomp::{cycle_decompose, verify_decomposition, DecompError, Decomposition};
use crate::hypergraph::{complete_hypergraph, families, GraphError, Hypergraph};
use crate::listcolor::{
    clique_list_edge_color, find_proper_list_coloring, galvin_color, BipartiteGraph, ListColorError,
};
use crate::mono::find_monochromatic;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    ListColor(#[from] ListColorError),
    #[error("pieces do not partition the host edges")]
    NotPartition,
    #[error("vertex {vertex} lies in {count} pieces, more than {limit}")]
    Membership { vertex: usize, count: usize, limit: usize },
    #[error("piece {0} is neither bipartite with small degree nor a small clique")]
    PieceNotColorable(usize),
    #[error("expected list size {expected}, got {got}")]
    ListSize { expected: usize, got: usize },
    #[error("expected host K_{expected}, got {got} vertices")]
    HostSize { expected: usize, got: usize },
    #[error("host on {n} vertices exceeds the limit {max}")]
    HostTooLarge { n: usize, max: usize },
    #[error("base coloring contains a monochromatic copy of the pattern")]
    BaseHasCopy,
    #[error("base color {color} is not below the type count {m}")]
    TypeOutOfRange { color: Color, m: usize },
    #[error("edge {edge:?} has no list color of type {required}")]
    Typeless { edge: Vec<usize>, required: usize },
    #[error("internal defect: {0}")]
    Defect(String),
}

fn check_host(lists: &ListAssignment, n: usize) -> Result<(), WitnessError> {
    let host = lists.host();
    if host.uniformity() != 2 || host.vertex_count() != n || host.edge_count() != n * n.saturating_sub(1) / 2 {
        return Err(WitnessError::HostSize { expected: n, got: host.vertex_count() });
    }
    Ok(())
}

/// Colors every piece of `d` properly from its lists: Galvin on bipartite
/// pieces of maximum degree at most k, exhaustive search on cliques K_m with
/// m ≤ k. If every vertex lies in at most r−1 pieces, no color appears r
/// times at a vertex, so there is no monochromatic K_{1,r}.
pub fn star_free_coloring(
    d: &Decomposition,
    lists: &ListAssignment,
    k: usize,
    r: usize,
) -> Result<EdgeColoring, WitnessError> {
    if lists.k() != k {
        return Err(WitnessError::ListSize { expected: k, got: lists.k() });
    }
    if **lists.host_arc() != d.host {
        return Err(GraphError::HostMismatch.into());
    }
    let report = verify_decomposition(d);
    if !report.is_partition() {
        return Err(WitnessError::NotPartition);
    }
    if let Some((vertex, &count)) = report.membership.iter().enumerate().find(|(_, &c)| c + 1 > r) {
        return Err(WitnessError::Membership { vertex, count, limit: r.saturating_sub(1) });
    }
    let host = lists.host_arc();
    let mut colors: Vec<Option<Color>> = vec![None; host.edge_count()];
    for (index, piece) in d.pieces.iter().enumerate() {
        let sub = Arc::new(piece.graph.clone());
        let piece_lists = lists.restrict(&sub)?;
        let colored = match BipartiteGraph::detect(sub.clone()) {
            Ok(b) if b.max_degree() <= k => galvin_color(&b, &piece_lists)?,
            _ => color_clique_piece(&sub, &piece_lists, k).ok_or(WitnessError::PieceNotColorable(index))??,
        };
        for (e, &c) in sub.edges().iter().zip(colored.colors()) {
            colors[host.index_of(e).expect("piece edge in host")] = Some(c);
        }
    }
    let colors = colors.into_iter().map(|c| c.expect("pieces cover the host")).collect();
    let out = EdgeColoring::new(host.clone(), colors)?;
    if !verify_list_coloring(lists, &out)? || out.max_color_degree() + 1 > r {
        return Err(WitnessError::Defect("piece colorings do not combine".into()));
    }
    Ok(out)
}

/// `None` if the piece is not a clique on its covered vertices with at most
/// k vertices.
fn color_clique_piece(
    sub: &Arc<Hypergraph>,
    lists: &ListAssignment,
    k: usize,
) -> Option<Result<EdgeColoring, WitnessError>> {
    let verts = sub.covered_vertices();
    let m = verts.len();
    if m > k || sub.edge_count() != m * m.saturating_sub(1) / 2 {
        return None;
    }
    let local = Arc::new(complete_hypergraph(m, 2).expect("uniformity 2"));
    let pos: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let local_lists = local
        .edges()
        .iter()
        .map(|e| lists.list(sub.index_of(&[verts[e[0]], verts[e[1]]]).expect("clique edge")).to_vec())
        .collect();
    let run = || -> Result<EdgeColoring, WitnessError> {
        let local_lists = ListAssignment::new(local.clone(), lists.k(), local_lists)?;
        let c = clique_list_edge_color(m, &local_lists)?;
        let colors = sub.edges().iter().map(|e| c.color_of(&[pos[&e[0]], pos[&e[1]]]).expect("local edge")).collect();
        Ok(EdgeColoring::new(sub.clone(), colors)?)
    };
    Some(run())
}

/// 2-lists on K_5 colored with no vertex seeing one color three times.
///
/// K_5 splits into two 5-cycles. A 5-cycle fails to be properly colorable
/// from 2-lists only when all its lists coincide; such a cycle is colored
/// with one color of that list, and the other cycle avoids that color.
pub fn star5_coloring(lists: &ListAssignment) -> Result<EdgeColoring, WitnessError> {
    check_host(lists, 5)?;
    if lists.k() != 2 {
        return Err(WitnessError::ListSize { expected: 2, got: lists.k() });
    }
    let host = lists.host_arc();
    let d = cycle_decompose(5, 5)?;
    let cycles: Vec<Arc<Hypergraph>> = d.pieces.iter().map(|p| Arc::new(p.graph.clone())).collect();
    let mut parts: Vec<Option<EdgeColoring>> = Vec::new();
    let mut cycle_lists = Vec::new();
    for c in &cycles {
        let l = lists.restrict(c)?;
        parts.push(find_proper_list_coloring(&l)?);
        cycle_lists.push(l);
    }
    if let Some(bad) = parts.iter().position(|p| p.is_none()) {
        let other = 1 - bad;
        let list = cycle_lists[bad].list(0).to_vec();
        if cycle_lists[bad].lists().iter().any(|l| *l != list) {
            return Err(WitnessError::Defect("uncolorable 5-cycle with differing lists".into()));
        }
        let a = list[0];
        parts[bad] = Some(EdgeColoring::constant(cycles[bad].clone(), a));
        let avoid = cycle_lists[other].lists().iter().map(|l| *l.iter().find(|&&c| c != a).expect("2-list")).collect();
        parts[other] = Some(EdgeColoring::new(cycles[other].clone(), avoid)?);
    }
    let mut colors = vec![0; host.edge_count()];
    for (c, part) in cycles.iter().zip(&parts) {
        let part = part.as_ref().expect("both cycles colored");
        for (e, &col) in c.edges().iter().zip(part.colors()) {
            colors[host.index_of(e).expect("cycle edge")] = col;
        }
    }
    let out = EdgeColoring::new(host.clone(), colors)?;
    if !verify_list_coloring(lists, &out)? || out.max_color_degree() > 2 {
        return Err(WitnessError::Defect("star5 composition failed".into()));
    }
    Ok(out)
}

/// An ordinary coloring with colors `0..m` verified to have no
/// monochromatic copy of `pattern`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseColoring {
    coloring: EdgeColoring,
    pattern: Hypergraph,
    m: usize,
}

impl BaseColoring {
    /// Checks the color range and the absence of a monochromatic pattern.
    pub fn new(coloring: EdgeColoring, pattern: Hypergraph, m: usize) -> Result<Self, WitnessError> {
        if let Some(&color) = coloring.colors().iter().find(|&&c| c as usize >= m) {
            return Err(WitnessError::TypeOutOfRange { color, m });
        }
        if find_monochromatic(&pattern, &coloring)?.is_some() {
            return Err(WitnessError::BaseHasCopy);
        }
        Ok(BaseColoring { coloring, pattern, m })
    }

    pub fn coloring(&self) -> &EdgeColoring {
        &self.coloring
    }

    pub fn pattern(&self) -> &Hypergraph {
        &self.pattern
    }

    /// Number of base colors (types).
    pub fn types(&self) -> usize {
        self.m
    }
}

/// The extremal t-coloring of K_n without a monochromatic rK_2, for
/// n ≤ rt + r − t: blocks of r−1 vertices get colors 0..t−1 in order, an
/// edge takes the color of its earliest block, and the last block (at most
/// 2r−1 vertices) is colored t−1 inside.
pub fn cockayne_lorimer_coloring(r: usize, t: usize, n: usize) -> Result<BaseColoring, WitnessError> {
    let max = (r * t + r).saturating_sub(t);
    if r == 0 || t == 0 || n > max {
        return Err(WitnessError::HostTooLarge { n, max });
    }
    let host = Arc::new(complete_hypergraph(n, 2)?);
    let block = |v: usize| {
        if r == 1 {
            t - 1
        } else {
            (v / (r - 1)).min(t - 1)
        }
    };
    let colors = host.edges().iter().map(|e| block(e[0]).min(block(e[1])) as Color).collect();
    let coloring = EdgeColoring::new(host, colors)?;
    BaseColoring::new(coloring, families::matching(r), t)
}

/// Recursive partition coloring of K_n^{(ℓ)}: split the vertices into r
/// nearly equal parts, give color 0 to every edge meeting two parts, and
/// recurse inside parts with the next color. Each color class is r-partite,
/// so no graph of chromatic number above r appears in one color.
pub fn chromatic_partition_coloring(n: usize, r: usize, l: usize) -> Result<EdgeColoring, WitnessError> {
    if r < 2 {
        return Err(WitnessError::Defect("branching must be at least 2".into()));
    }
    let host = Arc::new(complete_hypergraph(n, l)?);
    // level at which each vertex pair separates
    let mut path: Vec<Vec<usize>> = vec![Vec::new(); n];
    fn split(lo: usize, hi: usize, r: usize, path: &mut [Vec<usize>]) {
        let size = hi - lo;
        if size <= 1 {
            return;
        }
        let chunk = size.div_ceil(r);
        let mut start = lo;
        let mut part = 0;
        while start < hi {
            let end = (start + chunk).min(hi);
            for p in path.iter_mut().take(end).skip(start) {
                p.push(part);
            }
            split(start, end, r, path);
            start = end;
            part += 1;
        }
    }
    split(0, n, r, &mut path);
    let colors = host
        .edges()
        .iter()
        .map(|e| {
            let first = &path[e[0]];
            let depth =
                (0..first.len()).find(|&d| e.iter().any(|&v| path[v][d] != first[d])).expect("distinct vertices");
            depth as Color
        })
        .collect();
    Ok(EdgeColoring::new(host, colors)?)
}

/// Number of colors [`chromatic_partition_coloring`] uses: ⌈log_r n⌉.
pub fn chromatic_partition_colors(n: usize, r: usize) -> usize {
    let mut levels = 0;
    let mut size = n;
    while size > 1 {
        size = size.div_ceil(r);
        levels += 1;
    }
    levels
}

/// A type in `0..m` for every color of the universe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeAssignment {
    pub m: usize,
    pub types: BTreeMap<Color, usize>,
}

impl TypeAssignment {
    pub fn type_of(&self, c: Color) -> Option<usize> {
        self.types.get(&c).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeReduction {
    pub coloring: EdgeColoring,
    pub types: TypeAssignment,
    /// Union-bound potential before any decision.
    pub initial_potential: f64,
    /// Potential after each processed color.
    pub potentials: Vec<f64>,
}

/// Transfers a base coloring to a list coloring by typing colors.
///
/// Colors are typed one at a time in ascending order, each time choosing
/// the type that minimizes Φ = Σ_e P(no color of L_e gets type base(e)) under
/// uniformly random types for the undecided colors (method of conditional
/// expectations, ties to the smaller type). Edge e then takes the smallest
/// color of L_e whose type is base(e), so every output color class lies
/// inside one base color class.
pub fn type_reduction(base: &BaseColoring, lists: &ListAssignment) -> Result<TypeReduction, WitnessError> {
    let host = lists.host_arc();
    if **host != *base.coloring.host() {
        return Err(GraphError::HostMismatch.into());
    }
    let m = base.m;
    let q = 1.0 - 1.0 / m as f64;
    let k = lists.k();
    let pow: Vec<f64> = (0..=k).map(|u| q.powi(u as i32)).collect();
    let universe = lists.universe();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); universe.len()];
    for (e, l) in lists.lists().iter().enumerate() {
        for c in l {
            holders[universe.binary_search(c).expect("universe")].push(e);
        }
    }
    let want: Vec<usize> = base.coloring.colors().iter().map(|&c| c as usize).collect();
    let mut undecided: Vec<usize> = vec![k; host.edge_count()];
    let mut satisfied = vec![false; host.edge_count()];
    let mut phi: f64 = undecided.iter().map(|&u| pow[u]).sum();
    let initial_potential = phi;
    let mut potentials = Vec::with_capacity(universe.len());
    let mut types = BTreeMap::new();
    let mut delta = vec![0.0f64; m];
    for (ci, &color) in universe.iter().enumerate() {
        delta.iter_mut().for_each(|d| *d = 0.0);
        for &e in &holders[ci] {
            if satisfied[e] {
                continue;
            }
            let old = pow[undecided[e]];
            let new = pow[undecided[e] - 1];
            // every type but want[e] moves the edge from old to new
            for (tau, d) in delta.iter_mut().enumerate() {
                *d += if tau == want[e] { -old } else { new - old };
            }
        }
        let mut best = 0;
        for tau in 1..m {
            if delta[tau] < delta[best] {
                best = tau;
            }
        }
        let next = phi + delta[best];
        if next > phi * (1.0 + 1e-12) + 1e-300 {
            return Err(WitnessError::Defect(format!("potential rose from {phi} to {next}")));
        }
        for &e in &holders[ci] {
            if satisfied[e] {
                continue;
            }
            undecided[e] -= 1;
            if want[e] == best {
                satisfied[e] = true;
            }
        }
        // recompute exactly rather than accumulate rounding
        phi = (0..host.edge_count()).filter(|&e| !satisfied[e]).map(|e| pow[undecided[e]]).sum();
        potentials.push(phi);
        types.insert(color, best);
    }
    let mut colors = Vec::with_capacity(host.edge_count());
    for (e, l) in lists.lists().iter().enumerate() {
        match l.iter().find(|&&c| types[&c] == want[e]) {
            Some(&c) => colors.push(c),
            None => return Err(WitnessError::Typeless { edge: host.edge(e).to_vec(), required: want[e] }),
        }
    }
    let coloring = EdgeColoring::new(host.clone(), colors)?;
    Ok(TypeReduction { coloring, types: TypeAssignment { m, types }, initial_potential, potentials })
}

/// Parameters of the matching lower-bound construction for (r, k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingPlan {
    pub r: usize,
    pub k: usize,
    /// Number of types, ⌊k / (2 ln(rk))⌋; `None` when below 2.
    pub t: Option<usize>,
    /// Host size.
    pub n: usize,
}

impl MatchingPlan {
    pub fn new(r: usize, k: usize) -> MatchingPlan {
        let rk = (r * k) as f64;
        let raw = if rk > 1.0 { (k as f64 / (2.0 * rk.ln())).floor() } else { 0.0 };
        let t = raw as usize;
        if t < 2 {
            return MatchingPlan { r, k, t: None, n: (2 * r).saturating_sub(1) };
        }
        let n = (2 * r - 1).max((r - 1) * t + r);
        MatchingPlan { r, k, t: Some(t), n }
    }
}

/// List coloring of K_n (n from [`MatchingPlan`]) with no monochromatic
/// rK_2. Below two types the host has 2r−1 vertices and no rK_2 at all.
pub fn matching_witness(plan: &MatchingPlan, lists: &ListAssignment) -> Result<EdgeColoring, WitnessError> {
    check_host(lists, plan.n)?;
    if lists.k() != plan.k {
        return Err(WitnessError::ListSize { expected: plan.k, got: lists.k() });
    }
    match plan.t {
        None => Ok(lists.first_choice()),
        Some(t) => {
            let base = cockayne_lorimer_coloring(plan.r, t, plan.n)?;
            Ok(type_reduction(&base, lists)?.coloring)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{star_block_partition, walecki};
    use crate::matching::max_matching_per_color;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn kn(n: usize) -> Arc<Hypergraph> {
        Arc::new(complete_hypergraph(n, 2).unwrap())
    }

    fn random_lists(host: &Arc<Hypergraph>, k: usize, palette: usize, seed: u64) -> ListAssignment {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lists = (0..host.edge_count())
            .map(|_| rand::seq::index::sample(&mut rng, palette, k).into_iter().map(|c| c as Color).collect())
            .collect();
        ListAssignment::new(host.clone(), k, lists).unwrap()
    }

    #[test]
    fn walecki_star_free() {
        let d = walecki(6).unwrap();
        for seed in 0..200 {
            let l = random_lists(&kn(6), 2, 4, seed);
            let c = star_free_coloring(&d, &l, 2, 4).unwrap();
            assert!(find_monochromatic(&families::star(4), &c).unwrap().is_none());
        }
    }

    #[test]
    fn cycle_star_free() {
        let d = cycle_decompose(9, 4).unwrap();
        for seed in 0..200 {
            let l = random_lists(&kn(9), 2, 3, seed);
            let c = star_free_coloring(&d, &l, 2, 5).unwrap();
            assert!(c.max_color_degree() <= 4);
        }
    }

    #[test]
    fn block_star_free() {
        let d = star_block_partition(3, 3).unwrap();
        for seed in 0..200 {
            let l = random_lists(&kn(6), 3, 5, seed);
            let c = star_free_coloring(&d, &l, 3, 3).unwrap();
            assert!(verify_list_coloring(&l, &c).unwrap());
            assert!(find_monochromatic(&families::star(3), &c).unwrap().is_none());
        }
    }

    #[test]
    fn membership_violation_reported() {
        let d = walecki(6).unwrap();
        let l = ListAssignment::uniform(kn(6), 2);
        assert!(matches!(star_free_coloring(&d, &l, 2, 3), Err(WitnessError::Membership { .. })));
    }

    #[test]
    fn star5_uniform_lists() {
        let l = ListAssignment::new(kn(5), 2, vec![vec![1, 2]; 10]).unwrap();
        let c = star5_coloring(&l).unwrap();
        let d = cycle_decompose(5, 5).unwrap();
        let first = Arc::new(d.pieces[0].graph.clone());
        let second = Arc::new(d.pieces[1].graph.clone());
        assert!(first.edges().iter().all(|e| c.color_of(e) == Some(1)));
        assert!(second.edges().iter().all(|e| c.color_of(e) == Some(2)));
    }

    #[test]
    fn star5_random() {
        for seed in 0..500 {
            let l = random_lists(&kn(5), 2, 3 + (seed % 4) as usize, seed);
            let c = star5_coloring(&l).unwrap();
            assert!(find_monochromatic(&families::star(3), &c).unwrap().is_none());
        }
    }

    #[test]
    fn cockayne_lorimer_small() {
        let b = cockayne_lorimer_coloring(2, 2, 4).unwrap();
        assert!(max_matching_per_color(b.coloring()).unwrap().values().all(|&m| m <= 1));
        let b = cockayne_lorimer_coloring(3, 1, 5).unwrap();
        assert_eq!(b.coloring().palette(), vec![0]);
        let b = cockayne_lorimer_coloring(3, 2, 7).unwrap();
        assert!(max_matching_per_color(b.coloring()).unwrap().values().all(|&m| m <= 2));
        assert!(matches!(cockayne_lorimer_coloring(3, 2, 8), Err(WitnessError::HostTooLarge { n: 8, max: 7 })));
    }

    #[test]
    fn partition_colorings() {
        let c = chromatic_partition_coloring(4, 2, 2).unwrap();
        assert_eq!(c.palette(), vec![0, 1]);
        assert_eq!(c.class(0).len(), 4);
        assert!(find_monochromatic(&families::clique(3, 2).unwrap(), &c).unwrap().is_none());
        let c = chromatic_partition_coloring(9, 3, 2).unwrap();
        assert_eq!(c.palette().len(), 2);
        assert!(find_monochromatic(&families::clique(4, 2).unwrap(), &c).unwrap().is_none());
        assert_eq!(chromatic_partition_colors(9, 3), 2);
        assert_eq!(chromatic_partition_colors(10, 3), 3);
        let c = chromatic_partition_coloring(2, 2, 2).unwrap();
        assert!(find_monochromatic(&families::clique(3, 2).unwrap(), &c).unwrap().is_none());
    }

    #[test]
    fn single_type_takes_smallest() {
        let host = kn(4);
        let base = BaseColoring::new(EdgeColoring::constant(host.clone(), 0), families::matching(3), 1).unwrap();
        let l = random_lists(&host, 3, 9, 1);
        let out = type_reduction(&base, &l).unwrap();
        let expected: Vec<Color> = l.lists().iter().map(|x| x[0]).collect();
        assert_eq!(out.coloring.colors(), expected.as_slice());
    }

    #[test]
    fn potential_never_rises() {
        let base = cockayne_lorimer_coloring(3, 3, 9).unwrap();
        for seed in 0..50 {
            let l = random_lists(base.coloring().host_arc(), 8, 14, seed);
            match type_reduction(&base, &l) {
                Ok(out) => {
                    let mut prev = out.initial_potential;
                    for &p in &out.potentials {
                        assert!(p <= prev * (1.0 + 1e-12));
                        prev = p;
                    }
                    assert!(verify_list_coloring(&l, &out.coloring).unwrap());
                    assert!(find_monochromatic(&families::matching(3), &out.coloring).unwrap().is_none());
                }
                Err(WitnessError::Typeless { .. }) => assert!(out_of_guarantee(&base, &l)),
                Err(e) => panic!("{e}"),
            }
        }
    }

    fn out_of_guarantee(base: &BaseColoring, l: &ListAssignment) -> bool {
        let q = 1.0 - 1.0 / base.types() as f64;
        l.host().edge_count() as f64 * q.powi(l.k() as i32) >= 1.0
    }

    #[test]
    fn matching_plan_parameters() {
        let p = MatchingPlan::new(100, 60);
        assert_eq!(p.t, Some(3));
        assert_eq!(p.n, 397);
        let p = MatchingPlan::new(5, 4);
        assert_eq!(p.t, None);
        assert_eq!(p.n, 9);
    }
}
