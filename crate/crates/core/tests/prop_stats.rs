mod common;

use common::config;
use proptest::prelude::*;
use tracefault_core::stats::{bootstrap_ci, cohens_h, hit_at_k, mcnemar, mrr};

fn ranks() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..20, 1..200)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn hit_at_k_is_monotone(r in ranks()) {
        let mut prev = 0.0;
        for k in 1..=25 {
            let h = hit_at_k(&r, k).unwrap();
            prop_assert!(h >= prev && h <= 1.0);
            prev = h;
        }
    }

    #[test]
    fn mrr_bounds(r in ranks()) {
        let m = mrr(&r).unwrap();
        prop_assert!(m > 0.0 && m <= 1.0);
        prop_assert!(m >= hit_at_k(&r, 1).unwrap());
    }

    #[test]
    fn interval_contains_estimate(
        r in ranks(), binary in any::<bool>(), confidence in 0.5f64..0.999, seed in any::<u64>(),
    ) {
        let xs: Vec<f64> = r.iter().map(|&v| if binary { f64::from(u8::from(v == 1)) } else { 1.0 / v as f64 }).collect();
        let est = xs.iter().sum::<f64>() / xs.len() as f64;
        let (lo, hi) = bootstrap_ci(&xs, 1000, confidence, seed).unwrap();
        prop_assert!(lo <= est + 1e-12 && est <= hi + 1e-12, "{lo} <= {est} <= {hi}");
    }

    #[test]
    fn mcnemar_is_symmetric(a in 0usize..500, b in 0usize..500) {
        prop_assume!(a + b > 0);
        let (x, px) = mcnemar(a, b).unwrap();
        let (y, py) = mcnemar(b, a).unwrap();
        prop_assert_eq!(x, y);
        prop_assert_eq!(px, py);
        prop_assert!(x >= 0.0 && (0.0..=1.0).contains(&px));
    }

    #[test]
    fn cohens_h_is_antisymmetric(p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
        prop_assert_eq!(cohens_h(p, q), -cohens_h(q, p));
    }
}

#[test]
fn empty_table_is_degenerate() {
    assert!(mcnemar(0, 0).is_err());
}
