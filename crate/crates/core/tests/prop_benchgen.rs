mod common;

use std::collections::BTreeMap;

use common::config;
use proptest::prelude::*;
use tracefault_core::benchgen::{generate_benchmark, verify_ground_truth, LocationBucket, DEFAULT_COUNTS};
use tracefault_core::stats::chi_square_sf;
use tracefault_core::{serialize_scenario, BugType, CausalGraph, Domain};

const ALPHA: f64 = 0.01;
const BUG_SHARES: [(BugType, f64); 5] = [
    (BugType::LogicError, 0.30),
    (BugType::CommunicationFailure, 0.20),
    (BugType::DataCorruption, 0.20),
    (BugType::MissingValidation, 0.16),
    (BugType::RoleConfusion, 0.14),
];
const BUCKET_SHARES: [(LocationBucket, f64); 3] =
    [(LocationBucket::Early, 0.60), (LocationBucket::Middle, 0.30), (LocationBucket::Late, 0.10)];

/// Pearson goodness of fit; returns the upper-tail p-value.
fn gof<K: Ord>(observed: &BTreeMap<K, usize>, expected: &[(K, f64)], n: usize) -> f64 {
    let stat: f64 = expected
        .iter()
        .map(|(k, share)| {
            let e = share * n as f64;
            let o = *observed.get(k).unwrap_or(&0) as f64;
            (o - e).powi(2) / e
        })
        .sum();
    chi_square_sf(stat, (expected.len() - 1) as f64)
}

fn small_counts(per: usize) -> Vec<(Domain, usize)> {
    Domain::ALL.iter().map(|&d| (d, per)).collect()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn same_seed_same_bytes(seed in any::<u64>(), per in 1usize..4) {
        let a = generate_benchmark(seed, &small_counts(per)).unwrap();
        let b = generate_benchmark(seed, &small_counts(per)).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(serialize_scenario(&x.scenario), serialize_scenario(&y.scenario));
        }
    }

    #[test]
    fn every_scenario_verifies_and_error_is_downstream(seed in any::<u64>(), per in 1usize..4) {
        for g in generate_benchmark(seed, &small_counts(per)).unwrap() {
            let report = verify_ground_truth(&g).unwrap();
            prop_assert!(report.passed(), "{:?}", report);
            let gt = &g.scenario.ground_truth;
            let graph = CausalGraph::build(&g.scenario.trace);
            prop_assert!(gt.error_node_id == gt.root_cause_node_id
                || graph.descendants(gt.root_cause_node_id).contains(&gt.error_node_id));
            prop_assert!((8..=15).contains(&g.scenario.trace.len()));
            prop_assert_eq!(LocationBucket::of_step(gt.root_cause_node_id), Some(g.bug.bucket));
        }
    }

    #[test]
    fn distributions_fit_their_targets(seed in any::<u64>()) {
        let all = generate_benchmark(seed, &DEFAULT_COUNTS).unwrap();
        let n = all.len();
        prop_assert!(n >= 550);
        let mut bugs = BTreeMap::new();
        let mut buckets = BTreeMap::new();
        let mut domains = BTreeMap::new();
        for g in &all {
            *bugs.entry(g.scenario.ground_truth.bug_type).or_insert(0) += 1;
            *buckets.entry(g.bug.bucket).or_insert(0) += 1;
            *domains.entry(g.scenario.trace.domain).or_insert(0) += 1;
        }
        prop_assert!(gof(&bugs, &BUG_SHARES, n) > ALPHA);
        prop_assert!(gof(&buckets, &BUCKET_SHARES, n) > ALPHA);
        let domain_shares: Vec<(Domain, f64)> = DEFAULT_COUNTS.iter().map(|&(d, c)| (d, c as f64 / n as f64)).collect();
        prop_assert!(gof(&domains, &domain_shares, n) > ALPHA);
    }
}
