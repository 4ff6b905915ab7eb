#![allow(dead_code)]

use proptest::prelude::*;
use tracefault_core::{ActionType, BugType, Domain, ExecutionTrace, GroundTruth, Scenario, Step};

pub const CASES: u32 = 256;

pub fn config() -> ProptestConfig {
    ProptestConfig::with_cases(CASES)
}

const AGENTS: [&str; 6] = ["Planner", "Coder", "Reviewer", "Executor", "Searcher", "Writer"];
const ACTIONS: [ActionType; 11] = [
    ActionType::Plan,
    ActionType::Code,
    ActionType::Review,
    ActionType::Execute,
    ActionType::Message,
    ActionType::Search,
    ActionType::Analyze,
    ActionType::Synthesize,
    ActionType::Write,
    ActionType::Validate,
    ActionType::Other,
];
const WORDS: [&str; 14] = [
    "result", "total", "error", "failed", "check", "verified", "count", "patch", "draft", "summary", "wrong",
    "missing", "ok", "value",
];
const NAMES: [&str; 6] = ["alpha", "beta", "gamma", "delta", "eps", "zeta"];

#[derive(Debug, Clone)]
struct RawStep {
    agent: usize,
    action: usize,
    input: Vec<usize>,
    output: Vec<usize>,
    confidence: Option<f64>,
    produces: Vec<usize>,
    consumes: Vec<usize>,
}

fn raw_step() -> impl Strategy<Value = RawStep> {
    (
        0..AGENTS.len(),
        0..ACTIONS.len(),
        prop::collection::vec(0..WORDS.len() + NAMES.len(), 0..6),
        prop::collection::vec(0..WORDS.len() + NAMES.len(), 0..8),
        prop::option::of(0.0..=1.0f64),
        prop::collection::vec(0..NAMES.len(), 0..3),
        prop::collection::vec(0..NAMES.len(), 0..3),
    )
        .prop_map(|(agent, action, input, output, confidence, produces, consumes)| RawStep {
            agent,
            action,
            input,
            output,
            confidence,
            produces,
            consumes,
        })
}

fn text(ix: &[usize]) -> String {
    ix.iter()
        .map(|&i| if i < WORDS.len() { WORDS[i] } else { NAMES[i - WORDS.len()] })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Valid traces of 1..=max_len steps, with or without produces/consumes lists.
pub fn arb_trace(max_len: usize) -> impl Strategy<Value = ExecutionTrace> {
    (
        prop::collection::vec(raw_step(), 1..=max_len),
        any::<bool>(),
        0..Domain::ALL.len(),
        0u32..1_000_000,
    )
        .prop_map(|(raw, lists, domain, tag)| {
            let steps: Vec<Step> = raw
                .iter()
                .enumerate()
                .map(|(i, r)| Step {
                    step_id: i + 1,
                    agent: AGENTS[r.agent].to_string(),
                    action_type: ACTIONS[r.action],
                    input: text(&r.input),
                    output: text(&r.output),
                    timestamp: format!("2025-01-15T09:{:02}:{:02}Z", i / 60, i % 60),
                    confidence: r.confidence,
                    produces: lists.then(|| r.produces.iter().map(|&p| NAMES[p].to_string()).collect()),
                    consumes: lists.then(|| r.consumes.iter().map(|&p| NAMES[p].to_string()).collect()),
                })
                .collect();
            let mut agents: Vec<String> = Vec::new();
            for s in &steps {
                if !agents.contains(&s.agent) {
                    agents.push(s.agent.clone());
                }
            }
            ExecutionTrace {
                scenario_id: format!("t_{tag:06}"),
                domain: Domain::ALL[domain],
                agents,
                steps,
            }
        })
}

/// A trace together with an error step chosen inside it.
pub fn arb_trace_and_error(max_len: usize) -> impl Strategy<Value = (ExecutionTrace, usize)> {
    arb_trace(max_len).prop_flat_map(|t| {
        let n = t.len();
        (Just(t), 1..=n)
    })
}

pub fn arb_scenario(max_len: usize) -> impl Strategy<Value = Scenario> {
    arb_trace(max_len)
        .prop_flat_map(|t| {
            let n = t.len();
            (Just(t), 1..=n, 0..BugType::ALL.len(), "[a-z ]{0,30}")
        })
        .prop_flat_map(|(t, e, b, d)| (Just(t), Just(e), 1..=e, Just(b), Just(d)))
        .prop_map(|(t, e, r, b, d)| {
            Scenario::new(
                t,
                GroundTruth {
                    error_node_id: e,
                    root_cause_node_id: r,
                    bug_type: BugType::ALL[b],
                    bug_description: d,
                },
            )
            .expect("strategy builds valid scenarios")
        })
}
