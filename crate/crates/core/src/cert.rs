//! Self-describing certificate records. [`Certificate::verify`] recomputes
//! every check from the payload; stored check results are informational.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::bounds::{bound_table, certificate, BoundResult, BoundsError, CertificateParams, CertificateValue};
use crate::coloring::{verify_list_coloring, EdgeColoring, ListAssignment};
use crate::hypergraph::{complete_hypergraph, GraphError, Hypergraph};
use crate::mono::find_monochromatic;
use crate::solver::{
    adversary_color_with, decide_list_lb, AdversaryOptions, LowerDecision, SearchBudget, SearchOutcome, SolverError,
};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum CertError {
    #[error("malformed certificate: {0}")]
    Format(#[from] serde_json::Error),
    #[error("unsupported certificate version {0:?}")]
    Version(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    LowerWitness,
    UpperWitness,
    LbProof,
    BoundTable,
    UnionBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: &str, pass: bool) -> Check {
        Check { name: name.into(), status: if pass { Status::Pass } else { Status::Fail }, detail: None }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = Some(detail.into());
        self
    }
}

/// An L-coloring with no monochromatic copy of the pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerWitness {
    pub pattern: Hypergraph,
    pub strategy: String,
    pub lists: ListAssignment,
    pub coloring: EdgeColoring,
}

/// Lists on `K_n^{(ℓ)}` under which every coloring has a monochromatic copy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperWitness {
    pub pattern: Hypergraph,
    pub n: usize,
    pub k: usize,
    pub lists: ListAssignment,
    /// Hex SHA-256 of the exhaustive adversary search.
    pub transcript: String,
}

/// Every k-list assignment on `K_n^{(ℓ)}` has a good coloring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LbProof {
    pub pattern: Hypergraph,
    pub n: usize,
    pub k: usize,
    pub patterns: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub r_min: u64,
    pub r_max: u64,
    pub k_min: u64,
    pub k_max: u64,
    pub rows: Vec<BoundResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnionBound {
    pub params: CertificateParams,
    pub value: CertificateValue,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    LowerWitness(LowerWitness),
    UpperWitness(UpperWitness),
    LbProof(LbProof),
    BoundTable(BoundTable),
    UnionBound(UnionBound),
}

impl Payload {
    pub fn kind(&self) -> CertKind {
        match self {
            Payload::LowerWitness(_) => CertKind::LowerWitness,
            Payload::UpperWitness(_) => CertKind::UpperWitness,
            Payload::LbProof(_) => CertKind::LbProof,
            Payload::BoundTable(_) => CertKind::BoundTable,
            Payload::UnionBound(_) => CertKind::UnionBound,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub version: String,
    pub payload: Payload,
    pub checks: Vec<Check>,
}

#[derive(Serialize, Deserialize)]
struct Raw {
    version: String,
    kind: CertKind,
    payload: Value,
    #[serde(default)]
    checks: Vec<Check>,
}

impl Serialize for Certificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::Error;
        let payload = match &self.payload {
            Payload::LowerWitness(p) => serde_json::to_value(p),
            Payload::UpperWitness(p) => serde_json::to_value(p),
            Payload::LbProof(p) => serde_json::to_value(p),
            Payload::BoundTable(p) => serde_json::to_value(p),
            Payload::UnionBound(p) => serde_json::to_value(p),
        }
        .map_err(S::Error::custom)?;
        Raw { version: self.version.clone(), kind: self.payload.kind(), payload, checks: self.checks.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = Raw::deserialize(d)?;
        let v = raw.payload;
        let payload = match raw.kind {
            CertKind::LowerWitness => serde_json::from_value(v).map(Payload::LowerWitness),
            CertKind::UpperWitness => serde_json::from_value(v).map(Payload::UpperWitness),
            CertKind::LbProof => serde_json::from_value(v).map(Payload::LbProof),
            CertKind::BoundTable => serde_json::from_value(v).map(Payload::BoundTable),
            CertKind::UnionBound => serde_json::from_value(v).map(Payload::UnionBound),
        }
        .map_err(D::Error::custom)?;
        Ok(Certificate { version: raw.version, payload, checks: raw.checks })
    }
}

/// Worst status across checks: any failure wins, then any unknown.
pub fn overall(checks: &[Check]) -> Status {
    if checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if checks.iter().any(|c| c.status == Status::Unknown) {
        Status::Unknown
    } else {
        Status::Pass
    }
}

impl Certificate {
    /// Builds a certificate and fills `checks` by running the verifier.
    pub fn issue(payload: Payload, budget: &SearchBudget) -> Result<Certificate, CertError> {
        let mut cert = Certificate { version: FORMAT_VERSION.into(), payload, checks: Vec::new() };
        cert.checks = cert.verify(budget)?;
        Ok(cert)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Certificate, CertError> {
        let cert: Certificate = serde_json::from_str(s)?;
        if cert.version != FORMAT_VERSION {
            return Err(CertError::Version(cert.version));
        }
        Ok(cert)
    }

    /// Recomputes every check from the payload.
    ///
    /// Structural errors (e.g. a coloring on the wrong host) are reported
    /// as failed checks rather than errors.
    pub fn verify(&self, budget: &SearchBudget) -> Result<Vec<Check>, CertError> {
        match &self.payload {
            Payload::LowerWitness(w) => Ok(verify_lower(w)),
            Payload::UpperWitness(w) => verify_upper(w, budget),
            Payload::LbProof(p) => verify_lb(p, budget),
            Payload::BoundTable(t) => verify_table(t),
            Payload::UnionBound(u) => verify_union(u),
        }
    }
}

fn verify_lower(w: &LowerWitness) -> Vec<Check> {
    let mut checks = Vec::new();
    match verify_list_coloring(&w.lists, &w.coloring) {
        Ok(ok) => checks.push(Check::new("list-compliant", ok)),
        Err(e) => checks.push(Check::new("list-compliant", false).with_detail(e.to_string())),
    }
    match find_monochromatic(&w.pattern, &w.coloring) {
        Ok(None) => checks.push(Check::new("no-monochromatic", true)),
        Ok(Some(emb)) => checks.push(
            Check::new("no-monochromatic", false)
                .with_detail(format!("color {} on vertices {:?}", emb.color, emb.vertex_map)),
        ),
        Err(e) => checks.push(Check::new("no-monochromatic", false).with_detail(e.to_string())),
    }
    checks
}

fn verify_upper(w: &UpperWitness, budget: &SearchBudget) -> Result<Vec<Check>, CertError> {
    let host = complete_hypergraph(w.n, w.pattern.uniformity())?;
    let mut checks = vec![Check::new("host", *w.lists.host() == host), Check::new("list-size", w.lists.k() == w.k)];
    if checks.iter().any(|c| c.status == Status::Fail) {
        return Ok(checks);
    }
    let run = adversary_color_with(
        &w.pattern,
        &w.lists,
        budget,
        AdversaryOptions { force_generic: false, transcript: true },
    )?;
    let search = match run.outcome {
        SearchOutcome::ProvenNone => Check::new("no-good-coloring", true),
        SearchOutcome::Found(_) => Check::new("no-good-coloring", false).with_detail("adversary found a good coloring"),
        SearchOutcome::Unknown => Check {
            name: "no-good-coloring".into(),
            status: Status::Unknown,
            detail: Some(format!("budget exhausted after {} nodes", run.stats.nodes)),
        },
    };
    let replayed = run.stats.transcript.unwrap_or_default();
    checks.push(search);
    checks.push(Check::new("transcript", replayed == w.transcript).with_detail(replayed));
    Ok(checks)
}

fn verify_lb(p: &LbProof, budget: &SearchBudget) -> Result<Vec<Check>, CertError> {
    Ok(vec![match decide_list_lb(&p.pattern, p.k, p.n, budget)? {
        LowerDecision::Proof { patterns } => Check::new("all-patterns-colorable", patterns == p.patterns)
            .with_detail(format!("{patterns} canonical patterns")),
        LowerDecision::Counterexample { lists, .. } => {
            Check::new("all-patterns-colorable", false).with_detail(format!("undefeatable lists {:?}", lists.lists()))
        }
        LowerDecision::Unknown { unresolved, .. } => Check {
            name: "all-patterns-colorable".into(),
            status: Status::Unknown,
            detail: Some(format!("{unresolved} patterns unresolved")),
        },
    }])
}

fn verify_table(t: &BoundTable) -> Result<Vec<Check>, CertError> {
    let rows = bound_table(t.r_min..=t.r_max, t.k_min..=t.k_max)?;
    let bad = t.rows.iter().filter(|r| !r.is_consistent()).count();
    Ok(vec![
        Check::new("rows-recomputed", rows == t.rows),
        Check::new("lower-le-upper", bad == 0).with_detail(format!("{bad} inconsistent rows")),
    ])
}

fn verify_union(u: &UnionBound) -> Result<Vec<Check>, CertError> {
    let fresh = certificate(&u.params)?;
    let mut checks = vec![Check::new("value-recomputed", fresh == u.value), Check::new("condition", fresh.pass)];
    if let Some(err) = fresh.rel_error {
        checks.push(Check::new("exact-agreement", err < 1e-9).with_detail(format!("relative error {err:e}")));
    }
    Ok(checks)
}

/// Lower witness on a host shared with `lists`.
pub fn lower_witness(pattern: Hypergraph, strategy: &str, lists: ListAssignment, coloring: EdgeColoring) -> Payload {
    Payload::LowerWitness(LowerWitness { pattern, strategy: strategy.into(), lists, coloring })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::hypergraph::families;
    use crate::solver::{decide_list_ub, Candidates, UpperDecision};

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn upper_witness_roundtrip_and_tamper() {
        let UpperDecision::Witness { lists, transcript, .. } =
            decide_list_ub(&families::star(2), 2, 3, &budget(), Candidates::AllPatterns).unwrap()
        else {
            panic!("expected a witness")
        };
        let payload = Payload::UpperWitness(UpperWitness { pattern: families::star(2), n: 3, k: 2, lists, transcript });
        let cert = Certificate::issue(payload, &budget()).unwrap();
        assert_eq!(overall(&cert.checks), Status::Pass);
        let json = cert.to_json();
        let back = Certificate::from_json(&json).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_json(), json);

        let tampered = json.replacen("\"transcript\": \"", "\"transcript\": \"0", 1);
        let bad = Certificate::from_json(&tampered).unwrap();
        assert_eq!(overall(&bad.verify(&budget()).unwrap()), Status::Fail);
    }

    #[test]
    fn union_bound_roundtrip() {
        let params = CertificateParams::MatchingUb { r: 1_000_000, k: 2, n: 2_400_000, t: 11 };
        let value = certificate(&params).unwrap();
        let cert = Certificate::issue(Payload::UnionBound(UnionBound { params, value }), &budget()).unwrap();
        assert_eq!(overall(&cert.checks), Status::Pass);
        let json = cert.to_json();
        assert_eq!(Certificate::from_json(&json).unwrap().to_json(), json);
    }

    #[test]
    fn lower_witness_detects_mono() {
        let host = Arc::new(complete_hypergraph(3, 2).unwrap());
        let lists = ListAssignment::uniform(host.clone(), 2);
        let c = EdgeColoring::new(host, vec![0, 1, 1]).unwrap();
        let cert = Certificate::issue(lower_witness(families::star(2), "manual", lists, c), &budget()).unwrap();
        assert_eq!(overall(&cert.checks), Status::Fail);
    }

    #[test]
    fn version_is_checked() {
        let params = CertificateParams::Types { n: 5, l: 2, m: 2, k: 10 };
        let value = certificate(&params).unwrap();
        let cert = Certificate::issue(Payload::UnionBound(UnionBound { params, value }), &budget()).unwrap();
        let json = cert.to_json().replace("\"version\": \"1\"", "\"version\": \"9\"");
        assert!(matches!(Certificate::from_json(&json), Err(CertError::Version(_))));
    }
}
