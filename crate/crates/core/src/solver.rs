//! Exact Ramsey and list Ramsey computations on small hosts.
//!
//! [`adversary_color`] is the universal player: given lists, it searches for
//! a list coloring without a monochromatic pattern. The existential player
//! is [`decide_list_ub`] (counterexample-guided search over canonical list
//! patterns) and its dual [`decide_list_lb`] (every pattern must be
//! defeated). Both walk canonical patterns in the same order, so when a
//! witness exists they report the same one.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::canon::{enumerate_patterns, CanonError, EnumOptions, HostSymmetry};
use crate::coloring::{Color, EdgeColoring, ListAssignment};
use crate::hypergraph::{complete_hypergraph, GraphError, Hypergraph};
use crate::matching::matching_up_to;
use crate::mono::PatternShape;

/// Hosts are handled as 64-bit edge masks.
pub const MAX_HOST_EDGES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error("host has {0} edges; the exact solver supports at most 64")]
    HostTooLarge(usize),
    #[error("no value found up to n = {0}")]
    Unresolved(usize),
    #[error("search budget exhausted at n = {n} after {nodes} nodes")]
    BudgetExhausted { n: usize, nodes: u64 },
}

/// Limits for one top-level call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Nodes per adversary search.
    pub node_limit: u64,
    /// Wall-clock limit for the whole call.
    pub time_limit: Option<Duration>,
    /// Raw list assignments kept in memory during pattern enumeration.
    pub pattern_limit: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { node_limit: 50_000_000, time_limit: None, pattern_limit: 50_000_000 }
    }
}

impl SearchBudget {
    fn limits(&self) -> Limits {
        Limits { nodes: self.node_limit, deadline: self.time_limit.map(|t| Instant::now() + t) }
    }
}

#[derive(Debug, Clone, Copy)]
struct Limits {
    nodes: u64,
    deadline: Option<Instant>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    ProvenNone,
    Unknown,
}

impl<T> SearchOutcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
    pub fn is_proven_none(&self) -> bool {
        matches!(self, SearchOutcome::ProvenNone)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed: Duration,
    /// Hex SHA-256 of the branching decisions, when requested.
    pub transcript: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryRun {
    pub outcome: SearchOutcome<EdgeColoring>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AdversaryOptions {
    /// Use the anchored embedding check for every pattern shape.
    pub force_generic: bool,
    /// Hash every branching decision into [`SearchStats::transcript`].
    pub transcript: bool,
}

/// Incremental test: does edge `e`, just given color `c`, complete a
/// monochromatic copy?
enum Detector {
    Star { leaves: u32 },
    Matching { size: usize },
    GraphClique { order: usize },
    Generic(GenericPattern),
}

struct GenericPattern {
    edges: Vec<Vec<usize>>,
    vertices: usize,
}

struct Host {
    n: usize,
    l: usize,
    edges: Vec<Vec<usize>>,
    /// edges at each vertex
    inc: Vec<u64>,
    /// pair → edge for graphs
    pair: Vec<usize>,
    graph: Arc<Hypergraph>,
}

impl Host {
    fn new(graph: &Arc<Hypergraph>) -> Self {
        let n = graph.vertex_count();
        let mut inc = vec![0u64; n];
        let edges: Vec<Vec<usize>> = graph.edges().iter().map(|e| e.to_vec()).collect();
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                inc[v] |= 1 << i;
            }
        }
        let mut pair = Vec::new();
        if graph.uniformity() == 2 {
            pair = vec![usize::MAX; n * n];
            for (i, e) in edges.iter().enumerate() {
                pair[e[0] * n + e[1]] = i;
                pair[e[1] * n + e[0]] = i;
            }
        }
        Host { n, l: graph.uniformity(), edges, inc, pair, graph: graph.clone() }
    }

    fn edge_id(&self, vs: &[usize]) -> Option<usize> {
        if self.l == 2 {
            let id = self.pair[vs[0] * self.n + vs[1]];
            (id != usize::MAX).then_some(id)
        } else {
            self.graph.index_of(vs)
        }
    }
}

struct State {
    class: Vec<u64>,
    /// per color, per vertex: neighbor mask (graphs only)
    adj: Vec<u64>,
}

impl Detector {
    fn new(pattern: &Hypergraph, force_generic: bool) -> Detector {
        let generic = || {
            Detector::Generic(GenericPattern {
                edges: pattern.edges().iter().map(|e| e.to_vec()).collect(),
                vertices: pattern.vertex_count(),
            })
        };
        if force_generic {
            return generic();
        }
        match PatternShape::of(pattern) {
            PatternShape::Star { leaves, .. } => Detector::Star { leaves: leaves as u32 },
            PatternShape::Matching { size } => Detector::Matching { size },
            PatternShape::Clique { order } if pattern.uniformity() == 2 => Detector::GraphClique { order },
            _ => generic(),
        }
    }

    fn completes(&self, host: &Host, st: &State, e: usize, c: usize) -> bool {
        let mask = st.class[c];
        let ev = &host.edges[e];
        match self {
            Detector::Star { leaves } => ev.iter().any(|&v| (mask & host.inc[v]).count_ones() >= *leaves),
            Detector::Matching { size } => {
                let rest = mask & !host.inc[ev[0]] & !host.inc[ev[1]];
                if (rest.count_ones() as usize) < size - 1 {
                    return false;
                }
                let edges: Vec<(usize, usize)> = bits(rest).map(|i| (host.edges[i][0], host.edges[i][1])).collect();
                matching_up_to(host.n, &edges, size - 1).len() >= size - 1
            }
            Detector::GraphClique { order } => {
                let rows = &st.adj[c * host.n..(c + 1) * host.n];
                let common = rows[ev[0]] & rows[ev[1]];
                has_clique(rows, common, order - 2)
            }
            Detector::Generic(p) => p.anchored(host, mask, e),
        }
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

fn has_clique(rows: &[u64], cands: u64, need: usize) -> bool {
    if need == 0 {
        return true;
    }
    if (cands.count_ones() as usize) < need {
        return false;
    }
    let mut rest = cands;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if has_clique(rows, rest & rows[v], need - 1) {
            return true;
        }
    }
    false
}

impl GenericPattern {
    /// Is there a copy inside `mask` that uses edge `e`?
    fn anchored(&self, host: &Host, mask: u64, e: usize) -> bool {
        let ev = &host.edges[e];
        let l = host.l;
        for f in &self.edges {
            for perm in permutations(l) {
                let mut map = vec![usize::MAX; self.vertices];
                let mut used = vec![false; host.n];
                for (i, &pv) in f.iter().enumerate() {
                    map[pv] = ev[perm[i]];
                    used[ev[perm[i]]] = true;
                }
                let rest: Vec<usize> = (0..self.vertices)
                    .filter(|&v| map[v] == usize::MAX && self.edges.iter().any(|g| g.contains(&v)))
                    .collect();
                if self.extend(host, mask, &rest, 0, &mut map, &mut used) {
                    return true;
                }
            }
        }
        false
    }

    fn edges_ok(&self, host: &Host, mask: u64, map: &[usize]) -> bool {
        self.edges.iter().all(|g| {
            if g.iter().any(|&v| map[v] == usize::MAX) {
                return true;
            }
            let mut image: Vec<usize> = g.iter().map(|&v| map[v]).collect();
            image.sort_unstable();
            host.edge_id(&image).is_some_and(|id| mask >> id & 1 == 1)
        })
    }

    fn extend(
        &self,
        host: &Host,
        mask: u64,
        rest: &[usize],
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == 0 && !self.edges_ok(host, mask, map) {
            return false;
        }
        if i == rest.len() {
            return true;
        }
        let pv = rest[i];
        for hv in 0..host.n {
            if used[hv] {
                continue;
            }
            map[pv] = hv;
            if self.edges_ok(host, mask, map) {
                used[hv] = true;
                if self.extend(host, mask, rest, i + 1, map, used) {
                    return true;
                }
                used[hv] = false;
            }
        }
        map[pv] = usize::MAX;
        false
    }
}

fn permutations(l: usize) -> Vec<Vec<usize>> {
    if l == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(l - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, l - 1);
            out.push(q);
        }
    }
    out
}

enum Flow {
    Found,
    Exhausted,
    Abort,
}

struct Adversary<'a> {
    host: &'a Host,
    detector: &'a Detector,
    allowed: Vec<Vec<usize>>,
    /// edges whose list holds each dense color
    list_mask: Vec<u64>,
    st: State,
    assign: Vec<usize>,
    uncolored: u64,
    used_count: Vec<usize>,
    nodes: u64,
    limits: Limits,
    hasher: Option<Sha256>,
}

impl Adversary<'_> {
    fn set(&mut self, e: usize, c: usize) {
        self.st.class[c] |= 1 << e;
        if self.host.l == 2 {
            let (a, b) = (self.host.edges[e][0], self.host.edges[e][1]);
            let n = self.host.n;
            self.st.adj[c * n + a] |= 1 << b;
            self.st.adj[c * n + b] |= 1 << a;
        }
    }

    fn unset(&mut self, e: usize, c: usize) {
        self.st.class[c] &= !(1 << e);
        if self.host.l == 2 {
            let (a, b) = (self.host.edges[e][0], self.host.edges[e][1]);
            let n = self.host.n;
            self.st.adj[c * n + a] &= !(1 << b);
            self.st.adj[c * n + b] &= !(1 << a);
        }
    }

    fn feasible(&mut self, e: usize, c: usize) -> bool {
        self.set(e, c);
        let bad = self.detector.completes(self.host, &self.st, e, c);
        self.unset(e, c);
        !bad
    }

    fn dfs(&mut self) -> Flow {
        if self.uncolored == 0 {
            return Flow::Found;
        }
        self.nodes += 1;
        if self.nodes > self.limits.nodes {
            return Flow::Abort;
        }
        if self.nodes.is_multiple_of(1024) && self.limits.deadline.is_some_and(|d| Instant::now() > d) {
            return Flow::Abort;
        }
        // forward check every open edge, branch on the tightest
        let mut best: Option<(usize, Vec<usize>)> = None;
        for e in bits(self.uncolored) {
            let opts: Vec<usize> = self.allowed[e].clone().into_iter().filter(|&c| self.feasible(e, c)).collect();
            if opts.is_empty() {
                return Flow::Exhausted;
            }
            if best.as_ref().is_none_or(|(_, b)| opts.len() < b.len()) {
                best = Some((e, opts));
            }
        }
        let (e, mut opts) = best.expect("open edge");
        opts.sort_by_key(|&c| (self.used_count[c], c));
        self.uncolored &= !(1 << e);
        let mut tried_fresh: Vec<u64> = Vec::new();
        for c in opts {
            if self.used_count[c] == 0 {
                // unused colors with the same remaining incidence are interchangeable
                let sig = self.list_mask[c] & self.uncolored;
                if tried_fresh.contains(&sig) {
                    continue;
                }
                tried_fresh.push(sig);
            }
            if let Some(h) = self.hasher.as_mut() {
                h.update((e as u32).to_le_bytes());
                h.update((c as u32).to_le_bytes());
            }
            self.assign[e] = c;
            self.used_count[c] += 1;
            self.set(e, c);
            match self.dfs() {
                Flow::Exhausted => {}
                other => return other,
            }
            self.unset(e, c);
            self.used_count[c] -= 1;
        }
        self.assign[e] = usize::MAX;
        self.uncolored |= 1 << e;
        if let Some(h) = self.hasher.as_mut() {
            h.update(u32::MAX.to_le_bytes());
        }
        Flow::Exhausted
    }
}

/// Searches for an L-coloring without a monochromatic `pattern`.
pub fn adversary_color(
    pattern: &Hypergraph,
    lists: &ListAssignment,
    budget: &SearchBudget,
) -> Result<AdversaryRun, SolverError> {
    adversary_with(pattern, lists, budget.limits(), AdversaryOptions::default())
}

/// [`adversary_color`] with explicit options.
pub fn adversary_color_with(
    pattern: &Hypergraph,
    lists: &ListAssignment,
    budget: &SearchBudget,
    opts: AdversaryOptions,
) -> Result<AdversaryRun, SolverError> {
    adversary_with(pattern, lists, budget.limits(), opts)
}

fn adversary_with(
    pattern: &Hypergraph,
    lists: &ListAssignment,
    limits: Limits,
    opts: AdversaryOptions,
) -> Result<AdversaryRun, SolverError> {
    let started = Instant::now();
    let graph = lists.host_arc();
    if pattern.uniformity() != graph.uniformity() {
        return Err(GraphError::UniformityMismatch { pattern: pattern.uniformity(), host: graph.uniformity() }.into());
    }
    if graph.edge_count() > MAX_HOST_EDGES {
        return Err(SolverError::HostTooLarge(graph.edge_count()));
    }
    let done = |outcome, nodes, hasher: Option<Sha256>| AdversaryRun {
        outcome,
        stats: SearchStats { nodes, elapsed: started.elapsed(), transcript: hasher.map(|h| hex::encode(h.finalize())) },
    };
    let hasher = opts.transcript.then(Sha256::new);
    if pattern.vertex_count() > graph.vertex_count() {
        return Ok(done(SearchOutcome::Found(lists.first_choice()), 0, hasher));
    }
    if pattern.edge_count() == 0 {
        return Ok(done(SearchOutcome::ProvenNone, 0, hasher));
    }
    let universe = lists.universe();
    let dense = |c: &Color| universe.binary_search(c).expect("color in universe");
    let allowed: Vec<Vec<usize>> = lists.lists().iter().map(|l| l.iter().map(dense).collect()).collect();
    let mut list_mask = vec![0u64; universe.len()];
    for (e, l) in allowed.iter().enumerate() {
        for &c in l {
            list_mask[c] |= 1 << e;
        }
    }
    let host = Host::new(graph);
    let detector = Detector::new(pattern, opts.force_generic);
    let e = graph.edge_count();
    let mut adv = Adversary {
        host: &host,
        detector: &detector,
        allowed,
        list_mask,
        st: State {
            class: vec![0; universe.len()],
            adj: if host.l == 2 { vec![0; universe.len() * host.n] } else { Vec::new() },
        },
        assign: vec![usize::MAX; e],
        uncolored: if e == 64 { u64::MAX } else { (1u64 << e) - 1 },
        used_count: vec![0; universe.len()],
        nodes: 0,
        limits,
        hasher,
    };
    let flow = adv.dfs();
    let nodes = adv.nodes;
    let outcome = match flow {
        Flow::Found => {
            let colors = adv.assign.iter().map(|&c| universe[c]).collect();
            SearchOutcome::Found(EdgeColoring::new(graph.clone(), colors)?)
        }
        Flow::Exhausted => SearchOutcome::ProvenNone,
        Flow::Abort => SearchOutcome::Unknown,
    };
    Ok(done(outcome, nodes, adv.hasher.take()))
}

fn complete_host(n: usize, l: usize) -> Result<Arc<Hypergraph>, SolverError> {
    Ok(Arc::new(complete_hypergraph(n, l)?))
}

/// Least n ≤ `n_max` such that every k-coloring of K_n^{(ℓ)} contains a
/// monochromatic `pattern`.
pub fn ramsey_exact(pattern: &Hypergraph, k: usize, n_max: usize, budget: &SearchBudget) -> Result<usize, SolverError> {
    if k == 0 {
        return Err(GraphError::ZeroListSize.into());
    }
    let limits = budget.limits();
    let start = pattern.vertex_count().max(1);
    for n in start..=n_max {
        let host = complete_host(n, pattern.uniformity())?;
        let lists = ListAssignment::uniform(host, k);
        let run = adversary_with(pattern, &lists, limits, AdversaryOptions::default())?;
        match run.outcome {
            SearchOutcome::ProvenNone => return Ok(n),
            SearchOutcome::Found(_) => {}
            SearchOutcome::Unknown => return Err(SolverError::BudgetExhausted { n, nodes: run.stats.nodes }),
        }
    }
    Err(SolverError::Unresolved(n_max))
}

/// Candidate lists considered by [`decide_list_ub`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Candidates {
    /// Every canonical merge-closed pattern, fewest distinct lists first.
    #[default]
    AllPatterns,
    /// Only the uniform assignment; reduces to the ordinary Ramsey question.
    UniformOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpperDecision {
    /// Lists under which every coloring has a monochromatic copy.
    Witness {
        lists: ListAssignment,
        key: Vec<u64>,
        /// Hash of the adversary search that found no good coloring.
        transcript: String,
        rounds: usize,
    },
    /// Every candidate admits a good coloring.
    NoWitness {
        candidates: usize,
    },
    Unknown {
        candidates: usize,
        unresolved: usize,
    },
}

/// Existential player: counterexample-guided search for lists that defeat
/// every coloring. Colorings found by the adversary are kept and rule out
/// later candidates they are compatible with.
pub fn decide_list_ub(
    pattern: &Hypergraph,
    k: usize,
    n: usize,
    budget: &SearchBudget,
    candidates: Candidates,
) -> Result<UpperDecision, SolverError> {
    if k == 0 {
        return Err(GraphError::ZeroListSize.into());
    }
    let limits = budget.limits();
    let host = complete_host(n, pattern.uniformity())?;
    if host.edge_count() > MAX_HOST_EDGES {
        return Err(SolverError::HostTooLarge(host.edge_count()));
    }
    if pattern.vertex_count() > n {
        return Ok(UpperDecision::NoWitness { candidates: 0 });
    }
    let sym = HostSymmetry::of(&host)?;
    let mut defeating: Vec<EdgeColoring> = Vec::new();
    let mut examined = 0usize;
    let mut unresolved = 0usize;
    let max_distinct = match candidates {
        Candidates::UniformOnly => 1,
        Candidates::AllPatterns => host.edge_count().max(1),
    };
    for d in 1..=max_distinct {
        let opts = EnumOptions { distinct_lists: Some(d), max_raw: budget.pattern_limit };
        for cand in enumerate_patterns(&host, k, &sym, &opts)? {
            examined += 1;
            if defeating.iter().any(|c| c.colors().iter().zip(cand.lists.lists()).all(|(x, l)| l.contains(x))) {
                continue;
            }
            let run = adversary_with(
                pattern,
                &cand.lists,
                limits,
                AdversaryOptions { force_generic: false, transcript: true },
            )?;
            match run.outcome {
                SearchOutcome::Found(c) => defeating.push(c),
                SearchOutcome::ProvenNone => {
                    return Ok(UpperDecision::Witness {
                        lists: cand.lists,
                        key: cand.key,
                        transcript: run.stats.transcript.expect("transcript requested"),
                        rounds: defeating.len(),
                    })
                }
                SearchOutcome::Unknown => unresolved += 1,
            }
        }
    }
    if unresolved > 0 {
        Ok(UpperDecision::Unknown { candidates: examined, unresolved })
    } else {
        Ok(UpperDecision::NoWitness { candidates: examined })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LowerDecision {
    /// Every canonical pattern has a good coloring.
    Proof {
        patterns: usize,
    },
    /// The first pattern (in enumeration order) with no good coloring.
    Counterexample {
        lists: ListAssignment,
        key: Vec<u64>,
    },
    Unknown {
        patterns: usize,
        checked: usize,
        unresolved: usize,
    },
}

/// Universal check: does every k-list assignment on K_n^{(ℓ)} admit a
/// coloring without a monochromatic `pattern`?
pub fn decide_list_lb(
    pattern: &Hypergraph,
    k: usize,
    n: usize,
    budget: &SearchBudget,
) -> Result<LowerDecision, SolverError> {
    decide_list_lb_with(pattern, k, n, budget, |_| None)
}

/// [`decide_list_lb`] where `constructive` may supply a candidate coloring
/// for a pattern first; it is used only if it verifies.
pub fn decide_list_lb_with<F>(
    pattern: &Hypergraph,
    k: usize,
    n: usize,
    budget: &SearchBudget,
    constructive: F,
) -> Result<LowerDecision, SolverError>
where
    F: Fn(&ListAssignment) -> Option<EdgeColoring> + Sync,
{
    if k == 0 {
        return Err(GraphError::ZeroListSize.into());
    }
    let limits = budget.limits();
    let host = complete_host(n, pattern.uniformity())?;
    if host.edge_count() > MAX_HOST_EDGES {
        return Err(SolverError::HostTooLarge(host.edge_count()));
    }
    let sym = HostSymmetry::of(&host)?;
    let opts = EnumOptions { distinct_lists: None, max_raw: budget.pattern_limit };
    let patterns = enumerate_patterns(&host, k, &sym, &opts)?;
    let verdicts: Vec<SearchOutcome<()>> = patterns
        .par_iter()
        .map(|p| {
            if let Some(c) = constructive(&p.lists) {
                if crate::coloring::verify_list_coloring(&p.lists, &c)?
                    && crate::mono::find_monochromatic(pattern, &c)?.is_none()
                {
                    return Ok(SearchOutcome::Found(()));
                }
            }
            let run = adversary_with(pattern, &p.lists, limits, AdversaryOptions::default())?;
            Ok(match run.outcome {
                SearchOutcome::Found(_) => SearchOutcome::Found(()),
                SearchOutcome::ProvenNone => SearchOutcome::ProvenNone,
                SearchOutcome::Unknown => SearchOutcome::Unknown,
            })
        })
        .collect::<Result<_, SolverError>>()?;
    let mut unresolved = 0;
    for (p, v) in patterns.iter().zip(&verdicts) {
        match v {
            SearchOutcome::Found(()) => {}
            SearchOutcome::ProvenNone if unresolved == 0 => {
                return Ok(LowerDecision::Counterexample { lists: p.lists.clone(), key: p.key.clone() })
            }
            _ => unresolved += 1,
        }
    }
    if unresolved > 0 {
        let checked = verdicts.iter().filter(|v| v.is_found()).count();
        return Ok(LowerDecision::Unknown { patterns: patterns.len(), checked, unresolved });
    }
    Ok(LowerDecision::Proof { patterns: patterns.len() })
}
