//! Closed forms, asymptotic bound formulas and union-bound certificates,
//! evaluated in log space where values overflow machine integers.
//!
//! Logarithms are natural except where a value is stored as [`Magnitude::Log2`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::sync::Arc;

use num::bigint::BigUint;
use num::rational::BigRational;
use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Color, ListAssignment};
use crate::hypergraph::{complete_hypergraph, families, GraphError, Hypergraph};
use crate::solver::{adversary_color, SearchBudget, SearchOutcome, SolverError, MAX_HOST_EDGES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("outside the formula's domain: {0}")]
    Domain(String),
    #[error("pattern needs at least two edges, has {0}")]
    TooFewEdges(usize),
    #[error("pattern has {0} edges; subset enumeration is capped at 24")]
    TooManyEdges(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, BoundsError> {
    Err(BoundsError::Invalid(msg.into()))
}

/// A nonnegative extended real.
#[derive(Debug, Clone, PartialEq)]
pub enum Magnitude {
    Int(BigUint),
    Real(f64),
    /// Stored as log₂ of the value.
    Log2(f64),
    Unknown,
}

impl Magnitude {
    pub fn int(v: u64) -> Magnitude {
        Magnitude::Int(BigUint::from(v))
    }

    /// Natural log, `None` when unknown.
    pub fn ln(&self) -> Option<f64> {
        match self {
            Magnitude::Int(v) => Some(ln_biguint(v)),
            Magnitude::Real(v) => Some(v.ln()),
            Magnitude::Log2(v) => Some(v * LN_2),
            Magnitude::Unknown => None,
        }
    }

    /// Plain value when it fits an `f64`.
    pub fn value(&self) -> Option<f64> {
        let v = match self {
            Magnitude::Int(v) => v.to_f64()?,
            Magnitude::Real(v) => *v,
            Magnitude::Log2(v) => v.exp2(),
            Magnitude::Unknown => return None,
        };
        v.is_finite().then_some(v)
    }

    pub fn is_known(&self) -> bool {
        !matches!(self, Magnitude::Unknown)
    }

    /// Compares two known magnitudes; exact for integers.
    pub fn compare(&self, other: &Magnitude) -> Option<Ordering> {
        if let (Magnitude::Int(a), Magnitude::Int(b)) = (self, other) {
            return Some(a.cmp(b));
        }
        match (self.value(), other.value()) {
            (Some(a), Some(b)) => a.partial_cmp(&b),
            _ => self.ln()?.partial_cmp(&other.ln()?),
        }
    }

    fn min(self, other: Magnitude) -> Magnitude {
        match self.compare(&other) {
            Some(Ordering::Greater) => other,
            Some(_) => self,
            None if self.is_known() => self,
            None => other,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MagnitudeRepr {
    Null(()),
    Small(u64),
    Real(f64),
    Decimal(String),
    Log2 { log2: f64 },
}

impl Serialize for Magnitude {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            Magnitude::Int(v) => match v.to_u64() {
                Some(small) => MagnitudeRepr::Small(small),
                None => MagnitudeRepr::Decimal(v.to_str_radix(10)),
            },
            Magnitude::Real(v) => MagnitudeRepr::Real(*v),
            Magnitude::Log2(v) => MagnitudeRepr::Log2 { log2: *v },
            Magnitude::Unknown => MagnitudeRepr::Null(()),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Magnitude {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match MagnitudeRepr::deserialize(d)? {
            MagnitudeRepr::Null(()) => Magnitude::Unknown,
            MagnitudeRepr::Small(v) => Magnitude::int(v),
            MagnitudeRepr::Real(v) => Magnitude::Real(v),
            MagnitudeRepr::Decimal(s) => {
                Magnitude::Int(s.parse().map_err(|_| serde::de::Error::custom(format!("bad decimal integer {s:?}")))?)
            }
            MagnitudeRepr::Log2 { log2 } => Magnitude::Log2(log2),
        })
    }
}

/// Natural log of a big integer, accurate to about one ulp of the leading bits.
pub fn ln_biguint(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    let shift = bits.saturating_sub(64);
    let top = (v >> shift).to_f64().expect("64-bit value fits f64");
    top.ln() + shift as f64 * LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(q: &BigRational) -> f64 {
    assert!(q.is_positive(), "log of a nonpositive rational");
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    ln_biguint(n) - ln_biguint(d)
}

fn binom_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num::integer::binomial(BigUint::from(n), BigUint::from(k))
}

fn ratio(a: impl Into<BigInt>, b: impl Into<BigInt>) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Result of evaluating one bound family at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub lower: Magnitude,
    pub upper: Magnitude,
    pub regime: Option<String>,
    #[serde(default)]
    pub flags: Vec<String>,
    /// Secondary values (companion bounds, reduced color counts).
    #[serde(default)]
    pub extras: BTreeMap<String, Magnitude>,
}

impl BoundResult {
    fn new(family: &str, params: &[(&str, f64)]) -> BoundResult {
        BoundResult {
            family: family.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lower: Magnitude::Unknown,
            upper: Magnitude::Unknown,
            regime: None,
            flags: Vec::new(),
            extras: BTreeMap::new(),
        }
    }

    /// `lower ≤ upper` whenever both are known.
    pub fn is_consistent(&self) -> bool {
        match self.lower.compare(&self.upper) {
            Some(o) => o != Ordering::Greater,
            None => !(self.lower.is_known() && self.upper.is_known()),
        }
    }

    pub fn is_asymptotic(&self) -> bool {
        self.flags.iter().any(|f| f == ASYMPTOTIC)
    }
}

pub const ASYMPTOTIC: &str = "asymptotic-only";
pub const CAPPED: &str = "capped-by-ordinary";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedFamily {
    /// Ordinary Ramsey number of `rK_2`.
    Matching,
    /// `K_{1,r}` with two colors, list and ordinary alike.
    Star2,
    /// `K_{1,r}` with `k` colors.
    StarK,
}

/// R(rK₂,k) = rk + r − k + 1.
pub fn cockayne_lorimer(r: u64, k: u64) -> u64 {
    r * k + r + 1 - k
}

pub fn closed_form(family: ClosedFamily, r: u64, k: u64) -> Result<BoundResult, BoundsError> {
    if r == 0 || k == 0 {
        return invalid("r and k must be positive");
    }
    let params = [("r", r as f64), ("k", k as f64)];
    let mut b;
    match family {
        ClosedFamily::Matching => {
            b = BoundResult::new("matching-ordinary", &params);
            b.lower = Magnitude::int(cockayne_lorimer(r, k));
            b.upper = b.lower.clone();
        }
        ClosedFamily::Star2 => {
            b = BoundResult::new("star2", &[("r", r as f64)]);
            let v = if r.is_multiple_of(2) { 2 * r - 1 } else { 2 * r };
            b.lower = Magnitude::int(v);
            b.upper = b.lower.clone();
        }
        ClosedFamily::StarK => {
            b = BoundResult::new("star_k", &params);
            let low = (r - 1) * k + 1;
            b.lower = Magnitude::int(low);
            if r.is_multiple_of(2) && k.is_multiple_of(2) {
                b.upper = Magnitude::int(low);
                b.regime = Some("both-even".into());
            } else {
                b.upper = Magnitude::int(low + 1);
                b.regime = Some("window".into());
            }
        }
    }
    Ok(b)
}

/// Parameters for [`list_bound`]; the variant selects the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BoundParams {
    Matching { r: u64, k: u64 },
    CliqueHypergraph { r: u64, l: u64, k: u64 },
    HypergraphUpper { pi: f64, m_h: f64, k: u64 },
    ChromaticLower { r: u64, l: u64, k: u64 },
    NonPartiteLower { l: u64, k: u64 },
    LPartite { r: u64, l: u64, k: u64 },
}

/// `2(k+1) ≤ ln r`.
pub fn matching_regime_one(r: u64, k: u64) -> bool {
    r > 1 && 2.0 * (k as f64 + 1.0) <= (r as f64).ln()
}

pub fn list_bound(params: BoundParams) -> Result<BoundResult, BoundsError> {
    match params {
        BoundParams::Matching { r, k } => matching_list_bound(r, k),
        BoundParams::CliqueHypergraph { r, l, k } => {
            if l < 2 || r < l || k == 0 {
                return invalid("need r ≥ ℓ ≥ 2 and k ≥ 1");
            }
            let mut b = BoundResult::new("clique_hypergraph", &[("r", r as f64), ("l", l as f64), ("k", k as f64)]);
            let rf = r as f64;
            let exp = 4.0 * rf.powi((3 * l - 1) as i32) + 4.0 * k as f64 * rf.powi((l - 1) as i32) * rf.log2();
            b.upper = Magnitude::Log2(exp);
            Ok(b)
        }
        BoundParams::HypergraphUpper { pi, m_h, k } => {
            if !(0.0..1.0).contains(&pi) || m_h.is_nan() || m_h <= 0.0 || k == 0 {
                return invalid("need 0 ≤ π < 1, m(H) > 0, k ≥ 1");
            }
            let mut b = BoundResult::new("hypergraph_upper", &[("pi", pi), ("m_h", m_h), ("k", k as f64)]);
            b.upper = Magnitude::Log2(-(k as f64) * m_h * (1.0 - pi).log2());
            b.flags.push(ASYMPTOTIC.into());
            Ok(b)
        }
        BoundParams::ChromaticLower { r, l, k } => {
            if r == 0 || l == 0 || k == 0 {
                return invalid("r, ℓ, k must be positive");
            }
            let mut b = BoundResult::new("chromatic_lower", &[("r", r as f64), ("l", l as f64), ("k", k as f64)]);
            let e = (k as f64 * (r as f64).ln() / (4.0 * l as f64)).sqrt();
            b.lower = Magnitude::Log2(e / LN_2);
            if r == 2 && l == 2 {
                b.extras.insert("triangle".into(), Magnitude::Log2((k as f64).sqrt() / 4.0 / LN_2));
            }
            Ok(b)
        }
        BoundParams::NonPartiteLower { l, k } => {
            if l == 0 || k == 0 {
                return invalid("ℓ, k must be positive");
            }
            let mut b = BoundResult::new("non_partite_lower", &[("l", l as f64), ("k", k as f64)]);
            let c = non_partite_constant(l);
            b.lower = Magnitude::Log2(c * (k as f64).sqrt() / LN_2);
            b.extras.insert("c_l".into(), Magnitude::Real(c));
            Ok(b)
        }
        BoundParams::LPartite { r, l, k } => {
            if r == 0 || l < 2 || k < 2 {
                return invalid("need r ≥ 1, ℓ ≥ 2, k ≥ 2");
            }
            let mut b = BoundResult::new("l_partite", &[("r", r as f64), ("l", l as f64), ("k", k as f64)]);
            let lf = l as f64;
            let power = (r as f64).powi((l - 1) as i32);
            b.upper = Magnitude::Log2(power * ((k as f64).log2() + lf * lf.log2()));
            let c = l_partite_constant(r, l);
            b.extras.insert("c".into(), Magnitude::Real(c));
            let reduced = (c * k as f64 / (k as f64).ln()).floor();
            b.extras.insert("reduced_colors".into(), Magnitude::int(reduced as u64));
            Ok(b)
        }
    }
}

/// `c_ℓ` with `1/c_ℓ = 2ℓe^{ℓ/2}`.
pub fn non_partite_constant(l: u64) -> f64 {
    1.0 / (2.0 * l as f64 * (l as f64 / 2.0).exp())
}

/// `c` with `1/c = 2r^{ℓ−1}ℓ² ln ℓ`.
pub fn l_partite_constant(r: u64, l: u64) -> f64 {
    let lf = l as f64;
    1.0 / (2.0 * (r as f64).powi((l - 1) as i32) * lf * lf * lf.ln())
}

fn matching_list_bound(r: u64, k: u64) -> Result<BoundResult, BoundsError> {
    if r == 0 || k == 0 {
        return invalid("r and k must be positive");
    }
    let mut b = BoundResult::new("matching", &[("r", r as f64), ("k", k as f64)]);
    let ordinary = Magnitude::int(cockayne_lorimer(r, k));
    if r == 1 {
        b.lower = Magnitude::int(2);
        b.upper = Magnitude::int(2);
        b.regime = Some("single-edge".into());
        return Ok(b);
    }
    if k == 1 {
        b.lower = Magnitude::int(2 * r);
        b.upper = Magnitude::int(2 * r);
        b.regime = Some("one-color".into());
        return Ok(b);
    }
    let (rf, kf) = (r as f64, k as f64);
    let upper;
    if matching_regime_one(r, k) {
        b.regime = Some("small-k".into());
        b.lower = Magnitude::int(2 * r);
        upper = Magnitude::Real(2.0 * rf + 42.0 * rf.powf(kf / (kf + 1.0)));
    } else {
        b.regime = Some("large-k".into());
        let lrk = (rf * kf).ln();
        b.lower = Magnitude::Real(rf * kf / (4.0 * lrk));
        upper = Magnitude::Real(34.0 * rf * kf / lrk);
    }
    b.extras.insert("lemma_lower".into(), Magnitude::Real((2.0 * rf).max((rf - 1.0) * kf / (2.0 * (rf * kf).ln()))));
    if upper.compare(&ordinary) == Some(Ordering::Greater) {
        b.flags.push(CAPPED.into());
    }
    b.upper = upper.min(ordinary);
    Ok(b)
}

/// One row set of the sweep for a given `(r, k)`.
pub fn grid_point(r: u64, k: u64) -> Result<Vec<BoundResult>, BoundsError> {
    Ok(vec![
        closed_form(ClosedFamily::Matching, r, k)?,
        list_bound(BoundParams::Matching { r, k })?,
        closed_form(ClosedFamily::StarK, r, k)?,
        closed_form(ClosedFamily::Star2, r, 2)?,
        list_bound(BoundParams::ChromaticLower { r, l: 2, k })?,
        list_bound(BoundParams::LPartite { r, l: 2, k })?,
    ])
}

/// Sweeps `r × k`, in parallel, in row-major order.
pub fn bound_table(
    rs: std::ops::RangeInclusive<u64>,
    ks: std::ops::RangeInclusive<u64>,
) -> Result<Vec<BoundResult>, BoundsError> {
    let points: Vec<(u64, u64)> = rs.flat_map(|r| ks.clone().map(move |k| (r, k))).collect();
    let rows: Result<Vec<Vec<BoundResult>>, _> = points.par_iter().map(|&(r, k)| grid_point(r, k)).collect();
    Ok(rows?.into_iter().flatten().collect())
}

/// Tab-separated rendering: family, params, lower, upper, regime, flags.
pub fn table_row(b: &BoundResult) -> String {
    let params: Vec<String> = b.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let show = |m: &Magnitude| match m {
        Magnitude::Int(v) => v.to_string(),
        Magnitude::Real(v) => format!("{v:.6}"),
        Magnitude::Log2(v) => format!("2^{v:.6}"),
        Magnitude::Unknown => "-".into(),
    };
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}",
        b.family,
        params.join(","),
        show(&b.lower),
        show(&b.upper),
        b.regime.as_deref().unwrap_or("-"),
        if b.flags.is_empty() { "-".into() } else { b.flags.join(",") }
    )
}

/// Turán density of the graph clique K_r, `(r−2)/(r−1)` by Turán's theorem.
///
/// This is the only family with a known value shipped here; hypergraph Turán
/// densities are open in general and are taken as inputs.
pub fn clique_turan_density(r: u64) -> Result<BigRational, BoundsError> {
    if r < 2 {
        return invalid("need r ≥ 2");
    }
    Ok(ratio(r - 2, r - 1))
}

/// [`BoundParams::HypergraphUpper`] for H = K_r, with π(H) and m(H) filled in.
pub fn clique_upper_params(r: u64, k: u64) -> Result<BoundParams, BoundsError> {
    let pi = clique_turan_density(r)?;
    let m_h = m_of_h(&families::clique(r as usize, 2)?)?;
    let f = |q: BigRational| q.to_f64().expect("small rational");
    Ok(BoundParams::HypergraphUpper { pi: f(pi), m_h: f(m_h), k })
}

/// `max (e(H′)−1)/(v(H′)−ℓ)` over edge subsets with at least two edges.
pub fn m_of_h(h: &Hypergraph) -> Result<BigRational, BoundsError> {
    let e = h.edge_count();
    if e < 2 {
        return Err(BoundsError::TooFewEdges(e));
    }
    if e > 24 {
        return Err(BoundsError::TooManyEdges(e));
    }
    let l = h.uniformity() as i64;
    let n = h.vertex_count();
    let edge_masks: Vec<Vec<u64>> = h
        .edges()
        .iter()
        .map(|ed| {
            let mut m = vec![0u64; n.div_ceil(64)];
            for &v in ed.iter() {
                m[v / 64] |= 1 << (v % 64);
            }
            m
        })
        .collect();
    let mut best: Option<BigRational> = None;
    let mut cover = vec![0u64; n.div_ceil(64)];
    for subset in 1u32..(1 << e) {
        let ec = subset.count_ones() as i64;
        if ec < 2 {
            continue;
        }
        cover.iter_mut().for_each(|w| *w = 0);
        for (i, m) in edge_masks.iter().enumerate() {
            if subset >> i & 1 == 1 {
                cover.iter_mut().zip(m).for_each(|(w, x)| *w |= x);
            }
        }
        let v: i64 = cover.iter().map(|w| w.count_ones() as i64).sum();
        let d = ratio(ec - 1, v - l);
        if best.as_ref().is_none_or(|b| d > *b) {
            best = Some(d);
        }
    }
    Ok(best.expect("at least one subset"))
}

/// De Caen: `ex(K_r^{(ℓ)}, n)/binom(n,ℓ) ≤ 1 − ((n−r+1)/(n−ℓ+1))/binom(r−1,ℓ−1)`.
pub fn de_caen(n: u64, r: u64, l: u64) -> Result<BigRational, BoundsError> {
    if !(n >= r && r > l && l >= 2) {
        return invalid("need n ≥ r > ℓ ≥ 2");
    }
    let b = BigInt::from(binom_big(r - 1, l - 1));
    Ok(BigRational::one() - ratio(n - r + 1, n - l + 1) / BigRational::from_integer(b))
}

/// The `n → ∞` limit of [`de_caen`].
pub fn de_caen_limit(r: u64, l: u64) -> Result<BigRational, BoundsError> {
    if !(r > l && l >= 2) {
        return invalid("need r > ℓ ≥ 2");
    }
    let b = BigInt::from(binom_big(r - 1, l - 1));
    Ok(BigRational::one() - BigRational::new(BigInt::one(), b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateParams {
    /// `binom(n,ℓ)(1−1/m)^k < 1`.
    Types { n: u64, l: u64, m: u64, k: u64 },
    /// `(en/(r−1))^{(r−1)(k+t)} (1−(1−2(r−1)(k+t)/(n(t+1)))^k)^{n²/4} < 1`.
    MatchingUb { r: u64, k: u64, n: u64, t: u64 },
    /// `ck(1+2/ε)ℓ^ℓ/(1−π−2ε)^k < n^{1/m(H)}/ln n`, with `n` given as log₂.
    ContainerFeasibility { c: f64, k: u64, epsilon: f64, pi: f64, l: u64, m_h: f64, log2_n: f64 },
    /// `1/δ = ε⁻¹ binom(6r, r) ≤ 2^{2 binom(r,ℓ)²}` together with the de Caen premise at `m = 6r`.
    SupersatDelta { r: u64, l: u64 },
}

/// Evaluated certificate: pass iff `log_value < log_threshold`
/// (`≤` for the supersaturation bound).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateValue {
    pub log_value: f64,
    pub log_threshold: f64,
    pub pass: bool,
    /// Exact value as a reduced fraction, when it is rational.
    pub exact: Option<String>,
    /// Log recomputed from exact rational parts.
    pub exact_log: Option<f64>,
    pub rel_error: Option<f64>,
}

fn rel_error(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn certificate(params: &CertificateParams) -> Result<CertificateValue, BoundsError> {
    match *params {
        CertificateParams::Types { n, l, m, k } => {
            if m < 2 || l == 0 || n < l {
                return Err(BoundsError::Domain("need m ≥ 2 and n ≥ ℓ ≥ 1".into()));
            }
            let log_value = ln_biguint(&binom_big(n, l)) + k as f64 * (-1.0 / m as f64).ln_1p();
            let exact =
                BigRational::from_integer(BigInt::from(binom_big(n, l))) * num::pow::pow(ratio(m - 1, m), k as usize);
            let exact_log = ln_rational(&exact);
            Ok(CertificateValue {
                log_value,
                log_threshold: 0.0,
                pass: exact < BigRational::one(),
                exact: Some(exact.to_string()),
                exact_log: Some(exact_log),
                rel_error: Some(rel_error(log_value, exact_log)),
            })
        }
        CertificateParams::MatchingUb { r, k, n, t } => {
            if r < 2 || k == 0 || n < 2 {
                return Err(BoundsError::Domain("need r ≥ 2, k ≥ 1, n ≥ 2".into()));
            }
            let (rf, kf, nf, tf) = (r as f64, k as f64, n as f64, t as f64);
            let x = 2.0 * (rf - 1.0) * (kf + tf) / (nf * (tf + 1.0));
            if x >= 1.0 {
                return Err(BoundsError::Domain("2(r−1)(k+t) ≥ n(t+1): failure factor is 1".into()));
            }
            let exponent = (rf - 1.0) * (kf + tf);
            let first = exponent * (1.0 + (nf / (rf - 1.0)).ln());
            let inner = -(kf * (-x).ln_1p()).exp_m1();
            let log_value = first + nf * nf / 4.0 * inner.ln();

            let xq = ratio(2 * (r - 1) * (k + t), n * (t + 1));
            let y = BigRational::one() - num::pow::pow(BigRational::one() - xq, k as usize);
            let exact_first = exponent * (1.0 + ln_rational(&ratio(n, r - 1)));
            let exact_log = exact_first + nf * nf / 4.0 * ln_rational(&y);
            Ok(CertificateValue {
                log_value,
                log_threshold: 0.0,
                pass: exact_log < 0.0,
                exact: None,
                exact_log: Some(exact_log),
                rel_error: Some(rel_error(log_value, exact_log)),
            })
        }
        CertificateParams::ContainerFeasibility { c, k, epsilon, pi, l, m_h, log2_n } => {
            if !(c > 0.0 && epsilon > 0.0 && (0.0..1.0).contains(&pi) && m_h > 0.0 && l >= 1 && k >= 1) {
                return invalid("need c, ε, m(H) > 0, 0 ≤ π < 1, k, ℓ ≥ 1");
            }
            if pi + 3.0 * epsilon >= 1.0 {
                return Err(BoundsError::Domain(format!("π + 3ε = {} ≥ 1", pi + 3.0 * epsilon)));
            }
            let ln_n = log2_n * LN_2;
            if ln_n.is_nan() || ln_n <= 0.0 {
                return Err(BoundsError::Domain("n must exceed 1".into()));
            }
            let lf = l as f64;
            let lhs = c.ln() + (k as f64).ln() + (2.0 / epsilon).ln_1p() + lf * lf.ln()
                - k as f64 * (-pi - 2.0 * epsilon).ln_1p();
            let rhs = ln_n / m_h - ln_n.ln();
            Ok(CertificateValue {
                log_value: lhs,
                log_threshold: rhs,
                pass: lhs < rhs,
                exact: None,
                exact_log: None,
                rel_error: None,
            })
        }
        CertificateParams::SupersatDelta { r, l } => {
            if !(r > l && l >= 2) {
                return Err(BoundsError::Domain("need r > ℓ ≥ 2".into()));
            }
            let b = binom_big(r - 1, l - 1);
            let inv_delta = BigUint::from(6u32) * &b * binom_big(6 * r, r);
            let log_value = ln_biguint(&inv_delta);
            let brl = binom_big(r, l);
            let exp2 = BigUint::from(2u32) * &brl * &brl;
            let log_threshold = exp2.to_f64().unwrap_or(f64::INFINITY) * LN_2;
            let within = match exp2.to_u64() {
                Some(e) if e < 1 << 24 => inv_delta <= BigUint::one() << e,
                _ => (inv_delta.bits() as f64) <= log_threshold / LN_2,
            };
            let bi = BigInt::from(b);
            let x = BigRational::one() - ratio(5, 6) / BigRational::from_integer(bi);
            let premise = de_caen(6 * r, r, l)? < x;
            Ok(CertificateValue {
                log_value,
                log_threshold,
                pass: within && premise,
                exact: Some(inv_delta.to_string()),
                exact_log: Some(log_value),
                rel_error: Some(0.0),
            })
        }
    }
}

/// Smallest integer `q` with `q^{k+1} ≥ target`.
fn ceil_root(target: &BigUint, k1: u32, guess: f64) -> u64 {
    let mut q = guess.max(1.0).floor() as u64;
    while q > 1 && num::pow::pow(BigUint::from(q - 1), k1 as usize) >= *target {
        q -= 1;
    }
    while num::pow::pow(BigUint::from(q), k1 as usize) < *target {
        q += 1;
    }
    q
}

/// The `(n, t)` the upper-bound argument for matchings picks in each regime.
///
/// In the small-k regime `⌈20 r^{k/(k+1)}⌉` and the derived `t` are exact
/// integer roots; in the large-k regime `n = 2⌈16rk/ln(rk)⌉`, `t = k`.
pub fn matching_ub_parameters(r: u64, k: u64) -> Result<(u64, u64), BoundsError> {
    if r < 2 || k < 2 {
        return Err(BoundsError::Domain("the argument assumes r, k ≥ 2".into()));
    }
    let k1 = (k + 1) as u32;
    let rk = num::pow::pow(BigUint::from(r), k as usize);
    if matching_regime_one(r, k) {
        let root = 20.0 * (r as f64).powf(k as f64 / (k as f64 + 1.0));
        // ⌈20 r^{k/(k+1)}⌉: least q with q^{k+1} ≥ 20^{k+1} r^k
        let target = num::pow::pow(BigUint::from(20u32), k1 as usize) * &rk;
        let q = ceil_root(&target, k1, root);
        let n = 2 * r + 2 * q;
        // ⌈n / (20 r^{k/(k+1)})⌉: least p with (20p)^{k+1} r^k ≥ n^{k+1}
        let nk = num::pow::pow(BigUint::from(n), k1 as usize);
        let mut p = (n as f64 / root).floor().max(1.0) as u64;
        let fits = |p: u64| num::pow::pow(BigUint::from(20 * p), k1 as usize) * &rk >= nk;
        while p > 1 && fits(p - 1) {
            p -= 1;
        }
        while !fits(p) {
            p += 1;
        }
        Ok((n, (k - 1) * p - 1))
    } else {
        let rkf = (r * k) as f64;
        let n = 2 * (16.0 * rkf / rkf.ln()).ceil() as u64;
        Ok((n, k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub samples: u64,
    /// Samples where no good L-coloring exists.
    pub failures: u64,
    pub successes: u64,
    pub unknown: u64,
}

impl ProbeResult {
    /// Failure fraction over decided samples.
    pub fn rate(&self) -> Option<f64> {
        let decided = self.failures + self.successes;
        (decided > 0).then(|| self.failures as f64 / decided as f64)
    }
}

/// Draws `samples` uniform k-subsets of a (k+t)-color universe for each
/// edge of `K_n^{(ℓ)}` and asks the adversary search for a good coloring.
///
/// Sample `i` uses ChaCha8 seeded with `seed` on stream `i`, so the result
/// does not depend on the number of worker threads.
pub fn probe_upper(
    pattern: &Hypergraph,
    k: usize,
    t: usize,
    n: usize,
    samples: u64,
    seed: u64,
    budget: &SearchBudget,
) -> Result<ProbeResult, BoundsError> {
    if k == 0 {
        return invalid("k must be positive");
    }
    let host = Arc::new(complete_hypergraph(n, pattern.uniformity())?);
    if host.edge_count() > MAX_HOST_EDGES {
        return Err(SolverError::HostTooLarge(host.edge_count()).into());
    }
    let outcomes: Result<Vec<u8>, BoundsError> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let lists = random_lists(&host, k, k + t, seed, i);
            let run = adversary_color(pattern, &lists, budget)?;
            Ok(match run.outcome {
                SearchOutcome::ProvenNone => 0,
                SearchOutcome::Found(_) => 1,
                SearchOutcome::Unknown => 2,
            })
        })
        .collect();
    let mut res = ProbeResult { samples, failures: 0, successes: 0, unknown: 0 };
    for o in outcomes? {
        match o {
            0 => res.failures += 1,
            1 => res.successes += 1,
            _ => res.unknown += 1,
        }
    }
    Ok(res)
}

/// Uniform k-subsets of `0..universe`, one per edge, from stream `stream` of `seed`.
pub fn random_lists(host: &Arc<Hypergraph>, k: usize, universe: usize, seed: u64, stream: u64) -> ListAssignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let lists = (0..host.edge_count())
        .map(|_| sample(&mut rng, universe, k).into_iter().map(|c| c as Color).collect())
        .collect();
    ListAssignment::new(host.clone(), k, lists).expect("k distinct colors per edge")
}
