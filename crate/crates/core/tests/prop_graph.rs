mod common;

use std::collections::BTreeSet;

use common::{arb_trace, arb_trace_and_error, config};
use proptest::prelude::*;
use tracefault_core::{CausalGraph, Edge, EdgeKind};

proptest! {
    #![proptest_config(config())]

    #[test]
    fn built_graphs_are_dags(t in arb_trace(25)) {
        let g = CausalGraph::build(&t);
        prop_assert!(g.topological_order().is_some());
        let mut seen = BTreeSet::new();
        for e in g.edges() {
            prop_assert!(e.from < e.to);
            prop_assert!(e.from >= 1 && e.to <= t.len());
            prop_assert!(seen.insert((e.from, e.to, e.kind)), "duplicate {:?}", e);
        }
    }

    #[test]
    fn same_agent_neighbours_get_sequential_edges(t in arb_trace(25)) {
        let g = CausalGraph::build(&t);
        for w in t.steps.windows(2) {
            let want = Edge { from: w[0].step_id, to: w[1].step_id, kind: if w[0].agent == w[1].agent {
                EdgeKind::Sequential
            } else {
                EdgeKind::Communication
            } };
            prop_assert!(g.edges().contains(&want), "missing {:?}", want);
        }
    }

    #[test]
    fn backtrace_grows_with_depth((t, e) in arb_trace_and_error(25)) {
        let g = CausalGraph::build(&t);
        let mut prev: BTreeSet<usize> = BTreeSet::new();
        for k in 1..=t.len() + 1 {
            let c: BTreeSet<usize> = g.backtrace(e, k).unwrap().members().collect();
            prop_assert!(prev.is_subset(&c));
            prev = c;
        }
    }

    #[test]
    fn backtrace_members_reach_the_error((t, e) in arb_trace_and_error(25), depth in 1usize..12) {
        let g = CausalGraph::build(&t);
        let c = g.backtrace(e, depth).unwrap();
        prop_assert_eq!(c.depth_of.get(&e), Some(&0));
        for (&v, &k) in &c.depth_of {
            let d = g.shortest_path_len(v, e).unwrap();
            prop_assert!(d <= depth);
            prop_assert_eq!(d, k);
            if k > 0 {
                prop_assert!(g.children(v).iter().any(|w| c.depth_of.get(w) == Some(&(k - 1))));
            }
        }
    }

    #[test]
    fn full_depth_backtrace_is_all_ancestors((t, e) in arb_trace_and_error(25)) {
        let g = CausalGraph::build(&t);
        let c: BTreeSet<usize> = g.backtrace(e, t.len()).unwrap().members().collect();
        let mut want = g.ancestors(e);
        want.insert(e);
        prop_assert_eq!(c, want);
    }

    #[test]
    fn chain_betweenness_is_symmetric(n in 1usize..40) {
        let g = CausalGraph::from_edges(n, (1..n).map(|i| Edge { from: i, to: i + 1, kind: EdgeKind::Sequential }));
        let b = g.betweenness();
        for i in 0..n {
            prop_assert!((b[i] - b[n - 1 - i]).abs() < 1e-12);
        }
    }
}
