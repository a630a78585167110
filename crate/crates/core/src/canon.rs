//! Canonical forms of list assignments under color renaming and host
//! automorphisms, and exhaustive enumeration of canonical patterns.
//!
//! A list assignment on a host with at most 64 edges is encoded by one edge
//! bitmask per color (the edges whose list holds that color). Renaming
//! colors permutes the masks, so the sorted mask vector is invariant under
//! renaming; the canonical key is the least sorted vector over all host
//! automorphisms.
//!
//! Enumeration only produces *merge-closed* patterns, where every two colors
//! share some list. Two colors that never share a list can be merged into
//! one without changing list sizes, and any coloring from the merged lists
//! splits back into a coloring from the original lists whose color classes
//! are subsets of the merged ones. So a merged assignment with a good
//! coloring certifies the original, and quantifying over merge-closed
//! patterns is enough for both "every assignment" and "some assignment"
//! questions about monochromatic-free colorings.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::coloring::{Color, ListAssignment};
use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("host has {0} edges; canonical patterns support at most 64")]
    TooManyEdges(usize),
    #[error("host automorphism group exceeds {0} elements")]
    TooManySymmetries(usize),
    #[error("pattern enumeration exceeded the budget of {0} raw assignments")]
    BudgetExceeded(u64),
}

/// Largest automorphism group that is materialized.
pub const MAX_AUTOMORPHISMS: usize = 50_000;

/// Host automorphisms as edge permutations, with byte lookup tables for
/// permuting edge masks.
#[derive(Debug, Clone)]
pub struct HostSymmetry {
    edges: usize,
    chunks: usize,
    perms: Vec<Vec<usize>>,
    tables: Vec<u64>,
}

impl HostSymmetry {
    pub fn of(host: &Hypergraph) -> Result<Self, CanonError> {
        let e = host.edge_count();
        if e > 64 {
            return Err(CanonError::TooManyEdges(e));
        }
        Ok(Self::from_perms(e, edge_automorphisms(host)?))
    }

    /// Only the identity: keys are then invariant under color renaming
    /// alone.
    pub fn trivial(host: &Hypergraph) -> Result<Self, CanonError> {
        let e = host.edge_count();
        if e > 64 {
            return Err(CanonError::TooManyEdges(e));
        }
        Ok(Self::from_perms(e, vec![(0..e).collect()]))
    }

    fn from_perms(e: usize, perms: Vec<Vec<usize>>) -> Self {
        let chunks = e.div_ceil(8).max(1);
        let mut tables = vec![0u64; perms.len() * chunks * 256];
        for (s, perm) in perms.iter().enumerate() {
            for c in 0..chunks {
                for byte in 0..256usize {
                    let mut out = 0u64;
                    for j in 0..8 {
                        let bit = 8 * c + j;
                        if byte >> j & 1 == 1 && bit < e {
                            out |= 1 << perm[bit];
                        }
                    }
                    tables[(s * chunks + c) * 256 + byte] = out;
                }
            }
        }
        HostSymmetry { edges: e, chunks, perms, tables }
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Edge permutations, `perm[e]` is the image of edge `e`.
    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.perms
    }

    fn apply(&self, s: usize, mask: u64) -> u64 {
        let base = s * self.chunks * 256;
        let mut out = 0;
        for c in 0..self.chunks {
            out |= self.tables[base + c * 256 + ((mask >> (8 * c)) & 0xff) as usize];
        }
        out
    }

    /// Least sorted mask vector over the group.
    pub fn canonical_key(&self, masks: &[u64]) -> Vec<u64> {
        let mut best: Vec<u64> = masks.to_vec();
        best.sort_unstable();
        let mut cur = vec![0u64; masks.len()];
        for s in 1..self.perms.len() {
            for (dst, &m) in cur.iter_mut().zip(masks) {
                *dst = self.apply(s, m);
            }
            cur.sort_unstable();
            if cur < best {
                best.copy_from_slice(&cur);
            }
        }
        best
    }
}

/// Vertex permutations preserving the edge set, turned into distinct edge
/// permutations. Isolated vertices stay fixed.
fn edge_automorphisms(host: &Hypergraph) -> Result<Vec<Vec<usize>>, CanonError> {
    let n = host.vertex_count();
    let deg = host.degrees();
    let active: Vec<usize> = (0..n).filter(|&v| deg[v] > 0).collect();
    // refine by degree and the multiset of neighbor degrees
    let adj = host.adjacency();
    let label: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = adj[v].iter().map(|&w| deg[w]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect();
    // edges to check when vertex at position i is placed
    let pos: Vec<usize> = {
        let mut p = vec![usize::MAX; n];
        for (i, &v) in active.iter().enumerate() {
            p[v] = i;
        }
        p
    };
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); active.len()];
    for (ei, e) in host.edges().iter().enumerate() {
        let last = e.iter().map(|&v| pos[v]).max().expect("nonempty edge");
        checks[last].push(ei);
    }
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut found = 0usize;

    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        host: &Hypergraph,
        active: &[usize],
        label: &[(usize, Vec<usize>)],
        checks: &[Vec<usize>],
        sigma: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut BTreeSet<Vec<usize>>,
        found: &mut usize,
    ) -> Result<(), CanonError> {
        if i == active.len() {
            *found += 1;
            if *found > MAX_AUTOMORPHISMS {
                return Err(CanonError::TooManySymmetries(MAX_AUTOMORPHISMS));
            }
            let perm = host
                .edges()
                .iter()
                .map(|e| {
                    let image: Vec<usize> = e.iter().map(|&v| sigma[v]).collect();
                    host.index_of(&image).expect("automorphism maps edges to edges")
                })
                .collect();
            out.insert(perm);
            return Ok(());
        }
        let v = active[i];
        for &w in active {
            if used[w] || label[w] != label[v] {
                continue;
            }
            sigma[v] = w;
            let ok = checks[i].iter().all(|&ei| {
                let image: Vec<usize> = host.edge(ei).iter().map(|&x| sigma[x]).collect();
                host.contains_edge(&image)
            });
            if ok {
                used[w] = true;
                go(i + 1, host, active, label, checks, sigma, used, out, found)?;
                used[w] = false;
            }
        }
        sigma[v] = v;
        Ok(())
    }

    go(0, host, &active, &label, &checks, &mut sigma, &mut used, &mut out, &mut found)?;
    let identity: Vec<usize> = (0..host.edge_count()).collect();
    let mut perms: Vec<Vec<usize>> = out.into_iter().filter(|p| *p != identity).collect();
    perms.insert(0, identity);
    Ok(perms)
}

/// A list assignment in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalListPattern {
    pub key: Vec<u64>,
    pub distinct_lists: usize,
    pub lists: ListAssignment,
}

impl CanonicalListPattern {
    /// Enumeration order: fewer distinct lists first, then by key.
    pub fn order_cmp(&self, other: &Self) -> Ordering {
        (self.distinct_lists, &self.key).cmp(&(other.distinct_lists, &other.key))
    }
}

/// Per-color edge masks with colors renumbered densely.
pub fn color_masks(lists: &ListAssignment) -> Vec<u64> {
    let universe = lists.universe();
    let mut masks = vec![0u64; universe.len()];
    for (e, list) in lists.lists().iter().enumerate() {
        for c in list {
            let i = universe.binary_search(c).expect("color in universe");
            masks[i] |= 1 << e;
        }
    }
    masks
}

/// Rebuilds the list assignment encoded by a key: color `i` is the `i`-th
/// mask.
pub fn decode_key(host: &Arc<Hypergraph>, k: usize, key: &[u64]) -> ListAssignment {
    let lists = (0..host.edge_count())
        .map(|e| (0..key.len()).filter(|&i| key[i] >> e & 1 == 1).map(|i| i as Color).collect())
        .collect();
    ListAssignment::new(host.clone(), k, lists).expect("key encodes k-lists")
}

fn distinct_lists_of(edges: usize, key: &[u64]) -> usize {
    let lists: BTreeSet<u64> = (0..edges)
        .map(|e| key.iter().enumerate().filter(|(_, &m)| m >> e & 1 == 1).fold(0u64, |acc, (i, _)| acc | 1 << i))
        .collect();
    lists.len()
}

pub fn canonical_form(lists: &ListAssignment, sym: &HostSymmetry) -> CanonicalListPattern {
    let key = sym.canonical_key(&color_masks(lists));
    let distinct_lists = lists.distinct_lists();
    let decoded = decode_key(lists.host_arc(), lists.k(), &key);
    CanonicalListPattern { key, distinct_lists, lists: decoded }
}

/// Options for [`enumerate_patterns`].
#[derive(Debug, Clone, Copy)]
pub struct EnumOptions {
    /// Keep only patterns with exactly this many distinct lists.
    pub distinct_lists: Option<usize>,
    /// Abort once this many raw (pre-canonical) assignments were produced.
    pub max_raw: u64,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { distinct_lists: None, max_raw: 50_000_000 }
    }
}

struct RawEnum<'a> {
    edges: usize,
    k: usize,
    pairs_per_list: usize,
    opts: &'a EnumOptions,
    masks: Vec<u64>,
    /// pair_cover[a] has bit b set when colors a and b share a list
    pair_cover: Vec<u64>,
    covered: usize,
    list_masks: Vec<u64>,
    raw: u64,
    out: Vec<Vec<u64>>,
}

impl RawEnum<'_> {
    fn distinct(&self) -> usize {
        let mut seen: Vec<u64> = self.list_masks.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    fn go(&mut self, e: usize) -> Result<(), CanonError> {
        let u = self.masks.len();
        let rem = self.edges - e;
        let uncovered = u * u.saturating_sub(1) / 2 - self.covered;
        if uncovered > rem * self.pairs_per_list {
            return Ok(());
        }
        if let Some(d) = self.opts.distinct_lists {
            let dc = self.distinct();
            if dc > d || dc + rem < d {
                return Ok(());
            }
        }
        if e == self.edges {
            if uncovered == 0 {
                self.raw += 1;
                if self.raw > self.opts.max_raw {
                    return Err(CanonError::BudgetExceeded(self.opts.max_raw));
                }
                self.out.push(self.masks.clone());
            }
            return Ok(());
        }
        // j new colors u..u+j plus k−j old ones
        for j in 0..=self.k {
            let old = self.k - j;
            if old > u {
                continue;
            }
            if u + j > 64 {
                break;
            }
            for subset in crate::hypergraph::combinations(u, old) {
                let mut colors = subset;
                colors.extend(u..u + j);
                self.place(e, &colors)?;
            }
        }
        Ok(())
    }

    fn place(&mut self, e: usize, colors: &[usize]) -> Result<(), CanonError> {
        let u = self.masks.len();
        let top = colors.iter().copied().max().map_or(u, |m| m + 1).max(u);
        self.masks.resize(top, 0);
        self.pair_cover.resize(top, 0);
        let saved_cover: Vec<u64> = colors.iter().map(|&a| self.pair_cover[a]).collect();
        let saved_covered = self.covered;
        let mut list_mask = 0u64;
        for &a in colors {
            self.masks[a] |= 1 << e;
            list_mask |= 1 << a;
        }
        for &a in colors {
            for &b in colors {
                if a < b && self.pair_cover[a] >> b & 1 == 0 {
                    self.pair_cover[a] |= 1 << b;
                    self.covered += 1;
                }
            }
        }
        self.list_masks.push(list_mask);
        let result = self.go(e + 1);
        self.list_masks.pop();
        self.covered = saved_covered;
        for (&a, &c) in colors.iter().zip(&saved_cover) {
            self.pair_cover[a] = c;
            self.masks[a] &= !(1 << e);
        }
        self.masks.truncate(u);
        self.pair_cover.truncate(u);
        result
    }
}

/// All merge-closed k-list patterns on `host`, one per canonical class,
/// sorted by [`CanonicalListPattern::order_cmp`].
pub fn enumerate_patterns(
    host: &Arc<Hypergraph>,
    k: usize,
    sym: &HostSymmetry,
    opts: &EnumOptions,
) -> Result<Vec<CanonicalListPattern>, CanonError> {
    let edges = host.edge_count();
    if edges > 64 {
        return Err(CanonError::TooManyEdges(edges));
    }
    if edges == 0 {
        let lists = ListAssignment::new(host.clone(), k, Vec::new()).expect("empty host");
        return Ok(match opts.distinct_lists {
            Some(d) if d != 0 => Vec::new(),
            _ => vec![CanonicalListPattern { key: Vec::new(), distinct_lists: 0, lists }],
        });
    }
    let mut raw = RawEnum {
        edges,
        k,
        pairs_per_list: k * (k - 1) / 2,
        opts,
        masks: Vec::new(),
        pair_cover: Vec::new(),
        covered: 0,
        list_masks: Vec::new(),
        raw: 0,
        out: Vec::new(),
    };
    raw.go(0)?;
    let mut keys: Vec<Vec<u64>> = raw.out.par_iter().map(|m| sym.canonical_key(m)).collect();
    keys.par_sort_unstable();
    keys.dedup();
    let mut patterns: Vec<CanonicalListPattern> = keys
        .into_par_iter()
        .map(|key| {
            let distinct_lists = distinct_lists_of(edges, &key);
            let lists = decode_key(host, k, &key);
            CanonicalListPattern { key, distinct_lists, lists }
        })
        .collect();
    patterns.sort_by(|a, b| a.order_cmp(b));
    Ok(patterns)
}
