//! Acceptance gate: one PASS/FAIL line per criterion.

mod common;

use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use listramsey::bounds::{
    bound_table, certificate, closed_form, list_bound, m_of_h, matching_ub_parameters, random_lists, BoundParams,
    CertificateParams, ClosedFamily, Magnitude,
};
use listramsey::decomp::{cycle_decompose, walecki, Decomposition};
use listramsey::matching::max_matching_per_color;
use listramsey::mono::find_monochromatic_generic;
use listramsey::solver::{
    adversary_color, decide_list_lb, decide_list_ub, ramsey_exact, Candidates, LowerDecision, SearchOutcome,
    UpperDecision,
};
use listramsey::witness::{matching_witness, star5_coloring, star_free_coloring, MatchingPlan};
use listramsey::{complete_hypergraph, families, find_monochromatic, verify_list_coloring, EdgeColoring, Hypergraph};
use num::rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{brute_force_good_coloring, budget, density_connected, graph_patterns, kn, random_subgraph};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact_small_values() -> Outcome {
    let cases = [
        ("K3", families::clique(3, 2).unwrap(), 6),
        ("2K2", families::matching(2), 5),
        ("3K2", families::matching(3), 8),
        ("K1,2", families::star(2), 3),
        ("K1,3", families::star(3), 6),
    ];
    let mut seen = Vec::new();
    for (name, p, want) in cases {
        let got = ramsey_exact(&p, 2, 11, &budget()).map_err(|e| format!("{name}: {e}"))?;
        ensure(got == want, || format!("R({name},2) = {got}, expected {want}"))?;
        seen.push(format!("{name}={got}"));
    }
    Ok(seen.join(" "))
}

fn star2_decided() -> Outcome {
    let s2 = families::star(2);
    let ub = decide_list_ub(&s2, 2, 3, &budget(), Candidates::AllPatterns).map_err(|e| e.to_string())?;
    let UpperDecision::Witness { lists, .. } = ub else {
        return Err(format!("n=3: {ub:?}"));
    };
    ensure(adversary_color(&s2, &lists, &budget()).unwrap().outcome.is_proven_none(), || "witness re-check".into())?;
    let lb = decide_list_lb(&s2, 2, 2, &budget()).map_err(|e| e.to_string())?;
    ensure(matches!(lb, LowerDecision::Proof { .. }), || format!("n=2: {lb:?}"))?;
    Ok("witness at n=3, proof at n=2, R_l(K1,2;2)=3".into())
}

fn star_free_sweep(d: &Decomposition, r: usize, seeds: u64) -> Result<(), String> {
    let host = Arc::new(d.host.clone());
    let star = families::star(r);
    (0..seeds).into_par_iter().try_for_each(|seed| {
        let lists = random_lists(&host, 2, 2 + (seed % 5) as usize, seed, r as u64);
        let c = star_free_coloring(d, &lists, 2, r).map_err(|e| format!("r={r} seed {seed}: {e}"))?;
        ensure(verify_list_coloring(&lists, &c).unwrap(), || format!("r={r} seed {seed}: not list-compliant"))?;
        ensure(find_monochromatic(&star, &c).unwrap().is_none(), || format!("r={r} seed {seed}: monochromatic star"))
    })
}

fn star_constructions() -> Outcome {
    const SEEDS: u64 = 5000;
    star_free_sweep(&walecki(6).map_err(|e| e.to_string())?, 4, SEEDS)?;
    star_free_sweep(&cycle_decompose(9, 4).map_err(|e| e.to_string())?, 5, SEEDS)?;
    let k5 = kn(5);
    let s3 = families::star(3);
    (0..SEEDS).into_par_iter().try_for_each(|seed| {
        let lists = random_lists(&k5, 2, 2 + (seed % 5) as usize, seed, 3);
        let c = star5_coloring(&lists).map_err(|e| format!("K5 seed {seed}: {e}"))?;
        ensure(verify_list_coloring(&lists, &c).unwrap(), || format!("K5 seed {seed}: not list-compliant"))?;
        ensure(find_monochromatic(&s3, &c).unwrap().is_none(), || format!("K5 seed {seed}: monochromatic K1,3"))
    })?;
    Ok(format!("{SEEDS} seeds each on K6 (r=4), K9 (r=5), K5 (star5): 0 failures"))
}

fn type_reduction_at_scale() -> Outcome {
    let plan = MatchingPlan::new(100, 60);
    ensure(plan.t == Some(3) && plan.n == 397, || format!("plan {plan:?}"))?;
    let host = kn(397);
    let worst = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let lists = random_lists(&host, 60, 200, seed, 0);
            let c = matching_witness(&plan, &lists).map_err(|e| format!("seed {seed}: {e}"))?;
            ensure(verify_list_coloring(&lists, &c).unwrap(), || format!("seed {seed}: not list-compliant"))?;
            let per = max_matching_per_color(&c).unwrap();
            let m = per.values().copied().max().unwrap_or(0);
            ensure(m <= 99, || format!("seed {seed}: a color class has a matching of size {m}"))?;
            Ok(m)
        })
        .collect::<Result<Vec<_>, String>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    Ok(format!("100 seeds on K397 with 60-lists: largest monochromatic matching {worst} ≤ 99"))
}

fn union_bounds() -> Outcome {
    let types = certificate(&CertificateParams::Types { n: 5, l: 2, m: 2, k: 10 }).map_err(|e| e.to_string())?;
    let exact = BigRational::from_str(types.exact.as_deref().unwrap_or("")).map_err(|e| format!("{e:?}"))?;
    let want = BigRational::new(10.into(), 1024.into());
    ensure(types.pass && exact == want, || format!("types: {types:?}"))?;

    // hand-derived: r^{2/3} = 10^4, so n = 2r + 2·20·10^4 and t = ⌈n/(2·10^5)⌉ − 1;
    // 16·200/ln 200 = 603.99…, so n = 2·604 and t = k
    let expected = [((1_000_000u64, 2u64), (2_400_000u64, 11u64)), ((2, 100), (1208, 100))];
    let mut worst: f64 = 0.0;
    for ((r, k), (n, t)) in expected {
        let got = matching_ub_parameters(r, k).map_err(|e| e.to_string())?;
        ensure(got == (n, t), || format!("({r},{k}): parameters {got:?}, expected {:?}", (n, t)))?;
        let c = certificate(&CertificateParams::MatchingUb { r, k, n, t }).map_err(|e| e.to_string())?;
        let err = c.rel_error.unwrap_or(f64::INFINITY);
        ensure(c.pass && c.log_value < 0.0 && err < 1e-9, || format!("({r},{k}): {c:?}"))?;
        worst = worst.max(err);
    }
    Ok(format!("types = {exact} = 10/1024; matching_ub passes at (1e6,2) and (2,100), rel err ≤ {worst:.1e}"))
}

/// e^{2(k+1)} ≤ r, compared on integers: e^m is irrational, so r ≥ e^m ⇔ r > ⌊e^m⌋.
fn regime_one_exact(r: u64, k: u64) -> bool {
    let floor = (2.0 * (k as f64 + 1.0)).exp().floor();
    floor < 1e15 && r as f64 > floor
}

fn bound_grid() -> Outcome {
    let rows = bound_table(2..=100, 2..=100).map_err(|e| e.to_string())?;
    let mut matching = 0;
    for b in &rows {
        ensure(b.is_consistent(), || format!("lower > upper: {b:?}"))?;
        let (r, k) =
            (b.params.get("r").copied().unwrap_or(0.0) as u64, b.params.get("k").copied().unwrap_or(2.0) as u64);
        match b.family.as_str() {
            "matching" => {
                let want = if regime_one_exact(r, k) { "small-k" } else { "large-k" };
                ensure(b.regime.as_deref() == Some(want), || format!("regime for ({r},{k}): {:?}", b.regime))?;
                matching += 1;
            }
            "matching-ordinary" => {
                let v = Magnitude::int((r - 1) * k + r + 1);
                ensure(b.lower == v && b.upper == v, || format!("R(rK2,k) at ({r},{k}): {b:?}"))?;
            }
            "star2" => {
                let v = Magnitude::int(if r % 2 == 0 { 2 * r - 1 } else { 2 * r });
                ensure(b.lower == v && b.upper == v, || format!("star2 at r={r}: {b:?}"))?;
            }
            "star_k" => {
                let low = (r - 1) * k + 1;
                let up = if r % 2 == 0 && k % 2 == 0 { low } else { low + 1 };
                ensure(b.lower == Magnitude::int(low) && b.upper == Magnitude::int(up), || format!("star_k: {b:?}"))?;
            }
            _ => {}
        }
    }
    ensure(matching == 99 * 99, || format!("{matching} matching rows"))?;
    // r ≤ 100 never reaches 2(k+1) ≤ ln r, so probe the boundary just past the grid
    for (r, k) in [(403, 2), (404, 2), (2980, 3), (2981, 3), (162_754, 5), (162_755, 5)] {
        let b = list_bound(BoundParams::Matching { r, k }).map_err(|e| e.to_string())?;
        let want = if regime_one_exact(r, k) { "small-k" } else { "large-k" };
        ensure(b.regime.as_deref() == Some(want), || format!("regime for ({r},{k}): {:?}", b.regime))?;
    }
    let sample = closed_form(ClosedFamily::StarK, 4, 2).map_err(|e| e.to_string())?;
    ensure(sample.upper == Magnitude::int(7), || format!("star_k(4,2): {sample:?}"))?;
    Ok(format!("{} rows over r,k ∈ [2,100]: ordered, regimes exact, closed forms recomputed", rows.len()))
}

fn oracle_equivalence() -> Outcome {
    let patterns = graph_patterns();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    for trial in 0..1000 {
        let n = rng.gen_range(3..=8);
        let colors = rng.gen_range(1..=3u32);
        let host = kn(n);
        let c = EdgeColoring::new(host.clone(), (0..host.edge_count()).map(|_| rng.gen_range(0..colors)).collect())
            .unwrap();
        for (name, p) in &patterns {
            let fast = find_monochromatic(p, &c).unwrap().is_some();
            let slow = find_monochromatic_generic(p, &c).unwrap().is_some();
            ensure(fast == slow, || format!("detector mismatch: trial {trial}, {name}"))?;
        }
    }
    let mut adversary_cases = 0;
    for trial in 0..300u64 {
        let host = if trial % 2 == 0 {
            let n = rng.gen_range(4..=6);
            Arc::new(random_subgraph(&mut rng, n, 10))
        } else {
            kn(rng.gen_range(3..=5))
        };
        if host.edge_count() == 0 {
            continue;
        }
        let k = if host.edge_count() <= 6 { rng.gen_range(1..=3) } else { rng.gen_range(1..=2) };
        let lists = random_lists(&host, k, k + rng.gen_range(0..=2), trial, 7);
        let (name, p) = &patterns[trial as usize % patterns.len()];
        let truth = brute_force_good_coloring(p, &lists);
        let got = adversary_color(p, &lists, &budget()).unwrap().outcome;
        let agree = match got {
            SearchOutcome::Found(_) => truth,
            SearchOutcome::ProvenNone => !truth,
            SearchOutcome::Unknown => false,
        };
        ensure(agree, || format!("adversary mismatch: trial {trial}, {name}"))?;
        adversary_cases += 1;
    }
    let mut density_cases = 0;
    for _ in 0..200 {
        let (n, l) = if rng.gen_bool(0.7) { (rng.gen_range(3..=7), 2) } else { (rng.gen_range(4..=6), 3) };
        let all = complete_hypergraph(n, l).unwrap();
        let picked: Vec<usize> = (0..all.edge_count()).filter(|_| rng.gen_bool(0.5)).take(10).collect();
        let h: Hypergraph = all.edge_subgraph(picked);
        if h.edge_count() < 2 {
            continue;
        }
        let m = m_of_h(&h).unwrap();
        let (a, b) = density_connected(&h);
        ensure(m == BigRational::new(a.into(), b.into()), || format!("m(H) mismatch on {h:?}"))?;
        density_cases += 1;
    }
    Ok(format!(
        "1000 colorings × {} patterns, {adversary_cases} adversary cases, {density_cases} densities: 0 discrepancies",
        patterns.len()
    ))
}

fn triangle_list_ramsey() -> Outcome {
    let k3 = families::clique(3, 2).unwrap();
    let ub = decide_list_ub(&k3, 2, 6, &budget(), Candidates::AllPatterns).map_err(|e| e.to_string())?;
    let UpperDecision::Witness { lists, .. } = ub else {
        return Err(format!("n=6: {ub:?}"));
    };
    ensure(lists.distinct_lists() == 1, || "witness at n=6 is not the uniform assignment".into())?;
    match decide_list_lb(&k3, 2, 5, &budget()).map_err(|e| e.to_string())? {
        LowerDecision::Proof { patterns } => {
            Ok(format!("proof at n=5 over {patterns} canonical patterns, uniform witness at n=6"))
        }
        other => Err(format!("n=5: {other:?}")),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("exact small Ramsey values", exact_small_values),
        ("list Ramsey number of K1,2", star2_decided),
        ("constructive star lower bounds", star_constructions),
        ("type reduction at scale", type_reduction_at_scale),
        ("union-bound certificates", union_bounds),
        ("bound-table consistency", bound_grid),
        ("oracle equivalence", oracle_equivalence),
        ("list Ramsey number of K3", triangle_list_ramsey),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {}. {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
