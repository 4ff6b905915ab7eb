mod common;

use std::sync::OnceLock;

use common::config;
use proptest::prelude::*;
use tracefault_core::benchgen::generate_validation;
use tracefault_core::{evaluate, to_canonical_json, EvalOptions, Scenario};

fn pool() -> &'static [Scenario] {
    static DATA: OnceLock<Vec<Scenario>> = OnceLock::new();
    DATA.get_or_init(|| generate_validation(7).unwrap().into_iter().map(|g| g.scenario).collect())
}

fn run(scenarios: &[Scenario], seed: u64, threads: usize) -> (Vec<u8>, Vec<u8>) {
    let opts = EvalOptions {
        random_seed: seed,
        bootstrap_seed: seed.rotate_left(7),
        bootstrap_iterations: 200,
        ..EvalOptions::default()
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let e = pool.install(|| evaluate(scenarios, &opts).unwrap());
    (to_canonical_json(&e.metrics), to_canonical_json(&e.significance))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn fixed_seeds_give_identical_metrics(
        picks in prop::collection::btree_set(0usize..50, 2..12),
        seed in any::<u64>(),
        reverse in any::<bool>(),
    ) {
        let all = pool();
        let mut chosen: Vec<Scenario> = picks.iter().map(|&i| all[i].clone()).collect();
        let a = run(&chosen, seed, 1);
        if reverse {
            chosen.reverse();
        }
        let b = run(&chosen, seed, 4);
        prop_assert!(a == b);
    }
}
