//! Ground-truth verification for generated scenarios.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::features::{word_list, FeatureConfig};
use crate::graph::CausalGraph;
use crate::trace::ExecutionTrace;

use super::GeneratedScenario;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub scenario_id: String,
    /// The recorded step carries the mutation and differs from the clean run.
    pub bug_present: bool,
    /// The uninjected trace shows no failure marker while the injected one does.
    pub counterfactual: bool,
    /// The root cause is a proper ancestor of the error node.
    pub propagation: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.bug_present && self.counterfactual && self.propagation
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        [
            ("bug_present", self.bug_present),
            ("counterfactual", self.counterfactual),
            ("propagation", self.propagation),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name)
        .collect()
    }
}

fn has_failure_marker(text: &str, keywords: &[String]) -> bool {
    word_list(text)
        .iter()
        .any(|w| keywords.iter().any(|k| k.eq_ignore_ascii_case(w)))
}

fn trace_has_marker(trace: &ExecutionTrace, keywords: &[String]) -> bool {
    trace.steps.iter().any(|s| has_failure_marker(&s.output, keywords))
}

/// Runs the three ground-truth checks. Returns the report when all pass and
/// `VerificationFailed` naming every failed check otherwise.
pub fn verify_ground_truth(g: &GeneratedScenario) -> Result<VerificationReport> {
    let trace = &g.scenario.trace;
    let gt = &g.scenario.ground_truth;
    let root = gt.root_cause_node_id;
    let error = gt.error_node_id;
    let keywords = FeatureConfig::default().error_keywords;

    let bug_present = root <= g.clean.len() && {
        let clean_out = &g.clean.step(root).output;
        let got = &trace.step(root).output;
        got != clean_out && g.mutation.apply(clean_out).as_deref() == Some(got.as_str())
    };
    let counterfactual =
        !trace_has_marker(&g.clean, &keywords) && has_failure_marker(&trace.step(error).output, &keywords);
    let propagation = root != error && CausalGraph::build(trace).ancestors(error).contains(&root);

    let report = VerificationReport {
        scenario_id: trace.scenario_id.clone(),
        bug_present,
        counterfactual,
        propagation,
    };
    if report.passed() {
        Ok(report)
    } else {
        Err(Error::VerificationFailed {
            scenario_id: report.scenario_id.clone(),
            check: report.failed_checks().join(", "),
        })
    }
}
