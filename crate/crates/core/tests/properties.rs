use std::sync::Arc;

use listramsey::bounds::{
    certificate, closed_form, cockayne_lorimer, list_bound, random_lists, BoundParams, CertificateParams, ClosedFamily,
    Magnitude,
};
use listramsey::cert::{Certificate, Payload, UnionBound};
use listramsey::decomp::{star_block_partition, verify_decomposition, walecki};
use listramsey::io::{format_lists, parse_lists};
use listramsey::matching::max_matching_per_color;
use listramsey::witness::{cockayne_lorimer_coloring, star_free_coloring, type_reduction};
use listramsey::{complete_hypergraph, families, find_monochromatic, verify_list_coloring, SearchBudget};
use num::rational::BigRational;
use num::BigInt;
use proptest::prelude::*;

fn ln_exact_types(n: u64, l: u64, m: u64, k: u64) -> f64 {
    // binom(n,l) (m-1)^k / m^k as one big fraction
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..l {
        num *= n - i;
        den *= i + 1;
    }
    for _ in 0..k {
        num *= m - 1;
        den *= m;
    }
    listramsey::bounds::ln_rational(&BigRational::new(num, den))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn types_log_matches_exact(n in 2u64..40, l in 1u64..4, m in 2u64..20, k in 1u64..20) {
        prop_assume!(n >= l);
        let c = certificate(&CertificateParams::Types { n, l, m, k }).unwrap();
        let exact = ln_exact_types(n, l, m, k);
        let err = (c.log_value - exact).abs() / exact.abs().max(1e-300);
        prop_assert!(err < 1e-9 || (c.log_value - exact).abs() < 1e-12, "{} vs {}", c.log_value, exact);
        prop_assert_eq!(c.pass, exact < 0.0);
    }

    #[test]
    fn matching_ub_log_matches_exact(r in 2u64..=20, k in 1u64..=20, t in 0u64..=20, extra in 0u64..200) {
        let n = 2 * (r - 1) * (k + t) / (t + 1) + 1 + extra;
        let c = certificate(&CertificateParams::MatchingUb { r, k, n, t }).unwrap();
        prop_assert!(c.rel_error.unwrap() < 1e-9, "{:?}", c);
    }

    #[test]
    fn matching_ub_pass_region_is_monotone(r in 2u64..=30, k in 2u64..=12, t in 0u64..=12) {
        let start = 2 * (r - 1) * (k + t) / (t + 1) + 1;
        let mut passed = false;
        for n in (start..start + 3000).step_by(7) {
            let ok = certificate(&CertificateParams::MatchingUb { r, k, n, t }).unwrap().pass;
            prop_assert!(ok || !passed, "r={} k={} t={}: fails again at n={}", r, k, t, n);
            passed |= ok;
        }
    }

    #[test]
    fn matching_list_bounds_are_ordered(r in 1u64..5000, k in 1u64..200) {
        let b = list_bound(BoundParams::Matching { r, k }).unwrap();
        prop_assert!(b.is_consistent(), "{:?}", b);
        let ordinary = Magnitude::int(cockayne_lorimer(r, k));
        prop_assert_ne!(b.upper.compare(&ordinary), Some(std::cmp::Ordering::Greater));
        let c = closed_form(ClosedFamily::Matching, r, k).unwrap();
        prop_assert_eq!(c.lower, ordinary);
    }

    #[test]
    fn union_certificates_roundtrip(n in 2u64..60, m in 2u64..9, k in 1u64..80) {
        let params = CertificateParams::Types { n, l: 2, m, k };
        let value = certificate(&params).unwrap();
        let cert = Certificate::issue(Payload::UnionBound(UnionBound { params, value }), &SearchBudget::default()).unwrap();
        let json = cert.to_json();
        let back = Certificate::from_json(&json).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert_eq!(back.to_json(), json);
    }

    #[test]
    fn list_files_roundtrip(n in 2usize..9, k in 1usize..4, extra in 0usize..4, seed in any::<u64>()) {
        let host = Arc::new(complete_hypergraph(n, 2).unwrap());
        let lists = random_lists(&host, k, k + extra, seed, 0);
        let text = format_lists(&lists);
        prop_assert_eq!(parse_lists(&text, "p").unwrap(), lists);
    }

    #[test]
    fn walecki_partitions(half in 1usize..12) {
        let d = walecki(2 * half).unwrap();
        let rep = verify_decomposition(&d);
        prop_assert!(rep.is_partition());
        prop_assert!(rep.membership.iter().all(|&c| c == half));
    }

    #[test]
    fn star_blocks_avoid_stars(r in 2usize..5, k in 1usize..4, seed in any::<u64>()) {
        let d = star_block_partition(r, k).unwrap();
        let host = Arc::new(d.host.clone());
        let lists = random_lists(&host, k, 2 * k + 1, seed, 0);
        let c = star_free_coloring(&d, &lists, k, r).unwrap();
        prop_assert!(verify_list_coloring(&lists, &c).unwrap());
        prop_assert!(find_monochromatic(&families::star(r), &c).unwrap().is_none());
    }

    #[test]
    fn type_reduction_potential_never_rises(r in 2usize..5, t in 2usize..4, k in 8usize..24, seed in any::<u64>()) {
        let n = (r - 1) * t + r;
        let base = cockayne_lorimer_coloring(r, t, n).unwrap();
        let host = base.coloring().host_arc().clone();
        let lists = random_lists(&host, k, 2 * k, seed, 0);
        match type_reduction(&base, &lists) {
            Ok(red) => {
                let mut prev = red.initial_potential;
                for &p in &red.potentials {
                    prop_assert!(p <= prev * (1.0 + 1e-12) + 1e-300);
                    prev = p;
                }
                prop_assert!(verify_list_coloring(&lists, &red.coloring).unwrap());
                let per = max_matching_per_color(&red.coloring).unwrap();
                prop_assert!(per.values().all(|&m| m < r));
            }
            // allowed only when the union bound does not guarantee success
            Err(_) => prop_assert!(red_potential(&base, k) >= 1.0),
        }
    }
}

fn red_potential(base: &listramsey::witness::BaseColoring, k: usize) -> f64 {
    let e = base.coloring().host().edge_count() as f64;
    e * (1.0 - 1.0 / base.types() as f64).powi(k as i32)
}
