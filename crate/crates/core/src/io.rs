//! Text formats: list files (`v1 v2 … vℓ : c1,c2,…,ck` per edge), edge-list
//! pattern files and pattern family names.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::coloring::{Color, ListAssignment};
use crate::hypergraph::{families, GraphError, Hypergraph};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{origin}:{line}: {msg}")]
    At { origin: String, line: usize, msg: String },
    #[error("{origin}: {source}")]
    Graph { origin: String, source: GraphError },
    #[error("unknown pattern {0:?}; expected K<r>, K<r>^<l>, S<r>, M<r> or @file")]
    Pattern(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_vertices(s: &str, origin: &str, line: usize) -> Result<Vec<usize>, ParseError> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| ParseError::At {
                origin: origin.into(),
                line,
                msg: format!("bad vertex {t:?}"),
            })
        })
        .collect()
}

fn build_host(edges: Vec<Vec<usize>>, origin: &str) -> Result<Hypergraph, ParseError> {
    let graph_err = |source| ParseError::Graph { origin: origin.into(), source };
    let l = edges.first().map_or(2, Vec::len);
    let n = edges.iter().flatten().max().map_or(0, |v| v + 1);
    Hypergraph::new(l, n, edges).map_err(graph_err)
}

/// Parses a list file. The host is the set of listed edges on vertices
/// `0..=max`; every list must have the same size.
pub fn parse_lists(text: &str, origin: &str) -> Result<ListAssignment, ParseError> {
    let at = |line, msg: String| ParseError::At { origin: origin.into(), line, msg };
    let mut edges = Vec::new();
    let mut lists: Vec<Vec<Color>> = Vec::new();
    let mut k = None;
    for (ln, line) in content_lines(text) {
        let (vs, cs) = line.split_once(':').ok_or_else(|| at(ln, "missing ':' between edge and list".into()))?;
        let edge = parse_vertices(vs, origin, ln)?;
        if edge.is_empty() {
            return Err(at(ln, "empty edge".into()));
        }
        let list: Vec<Color> = cs
            .split(',')
            .map(|t| t.trim().parse::<Color>().map_err(|_| at(ln, format!("bad color {:?}", t.trim()))))
            .collect::<Result<_, _>>()?;
        let mut distinct = list.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != list.len() {
            return Err(at(ln, "repeated color in list".into()));
        }
        match k {
            None => k = Some(list.len()),
            Some(k) if k != list.len() => {
                return Err(at(ln, format!("list has {} colors, earlier lists have {k}", list.len())))
            }
            _ => {}
        }
        if edges.first().is_some_and(|e: &Vec<usize>| e.len() != edge.len()) {
            return Err(at(ln, "edge size differs from earlier edges".into()));
        }
        edges.push(edge);
        lists.push(list);
    }
    let k = k.ok_or_else(|| at(0, "no edges".into()))?;
    let host = Arc::new(build_host(edges.clone(), origin)?);
    let mut aligned = vec![Vec::new(); host.edge_count()];
    for (e, l) in edges.iter().zip(lists) {
        aligned[host.index_of(e).expect("edge of host")] = l;
    }
    ListAssignment::new(host, k, aligned).map_err(|source| ParseError::Graph { origin: origin.into(), source })
}

pub fn format_lists(lists: &ListAssignment) -> String {
    let mut out = String::new();
    for (e, l) in lists.host().edges().iter().zip(lists.lists()) {
        let vs: Vec<String> = e.iter().map(usize::to_string).collect();
        let cs: Vec<String> = l.iter().map(Color::to_string).collect();
        writeln!(out, "{} : {}", vs.join(" "), cs.join(",")).expect("string write");
    }
    out
}

/// Parses an edge-list pattern: one edge per line, vertices separated by spaces.
pub fn parse_edge_list(text: &str, origin: &str) -> Result<Hypergraph, ParseError> {
    let edges =
        content_lines(text).map(|(ln, line)| parse_vertices(line, origin, ln)).collect::<Result<Vec<_>, _>>()?;
    if edges.is_empty() {
        return Err(ParseError::At { origin: origin.into(), line: 0, msg: "no edges".into() });
    }
    build_host(edges, origin)
}

pub fn read_file(path: &Path) -> Result<String, ParseError> {
    std::fs::read_to_string(path).map_err(|source| ParseError::Io { path: path.display().to_string(), source })
}

/// `K4`, `K4^3` (or `K4^{3}`), `S3`, `M2`, or `@path` to an edge-list file.
pub fn parse_pattern(name: &str) -> Result<Hypergraph, ParseError> {
    let bad = || ParseError::Pattern(name.to_string());
    if let Some(path) = name.strip_prefix('@') {
        return parse_edge_list(&read_file(Path::new(path))?, path);
    }
    let mut chars = name.chars();
    let family = chars.next().ok_or_else(bad)?;
    let rest = chars.as_str();
    let (r, l) = match rest.split_once('^') {
        Some((r, l)) => (r, Some(l.trim_start_matches('{').trim_end_matches('}'))),
        None => (rest, None),
    };
    let r: usize = r.parse().map_err(|_| bad())?;
    if r == 0 {
        return Err(bad());
    }
    let graph_err = |source| ParseError::Graph { origin: name.into(), source };
    match (family, l) {
        ('K', None) => families::clique(r, 2).map_err(graph_err),
        ('K', Some(l)) => families::clique(r, l.parse().map_err(|_| bad())?).map_err(graph_err),
        ('S', None) => Ok(families::star(r)),
        ('M', None) => Ok(families::matching(r)),
        _ => Err(bad()),
    }
}
