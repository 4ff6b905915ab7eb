//! Blind split: anonymized scenario ids with the ground truth held apart.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::trace::{ExecutionTrace, GroundTruth, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub struct BlindScenario {
    pub trace: ExecutionTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlindBenchmark {
    /// Sorted by anonymized id.
    pub scenarios: Vec<BlindScenario>,
    /// Answer key: anonymized id to ground truth.
    pub answers: BTreeMap<String, GroundTruth>,
}

pub fn blind_id(scenario_id: &str, salt: &str) -> String {
    let mut h = Sha256::new();
    h.update(salt.as_bytes());
    h.update([0u8]);
    h.update(scenario_id.as_bytes());
    format!("s_{}", &hex::encode(h.finalize())[..16])
}

/// Replaces any case-insensitive occurrence of "bug" with "fault".
pub(crate) fn scrub(text: &str) -> String {
    let lower = text.to_ascii_lowercase();
    if !lower.contains("bug") {
        return text.to_string();
    }
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < text.len() {
        if lower[i..].starts_with("bug") {
            out.push_str("fault");
            i += 3;
        } else {
            let c = text[i..].chars().next().expect("in bounds");
            out.push(c);
            i += c.len_utf8();
        }
    }
    out
}

pub fn make_blind(scenarios: &[Scenario], salt: &str) -> BlindBenchmark {
    let mut blind = Vec::with_capacity(scenarios.len());
    let mut answers = BTreeMap::new();
    for s in scenarios {
        let id = blind_id(s.id(), salt);
        let mut trace = s.trace.clone();
        trace.scenario_id = id.clone();
        for step in &mut trace.steps {
            step.input = scrub(&step.input);
            step.output = scrub(&step.output);
        }
        answers.insert(id, s.ground_truth.clone());
        blind.push(BlindScenario { trace });
    }
    blind.sort_by(|a, b| a.trace.scenario_id.cmp(&b.trace.scenario_id));
    BlindBenchmark {
        scenarios: blind,
        answers,
    }
}

impl BlindBenchmark {
    /// Re-attaches the answer key, failing on any trace without an answer.
    pub fn join(&self) -> Result<Vec<Scenario>> {
        join_answers(self.scenarios.iter().map(|b| b.trace.clone()), &self.answers)
    }
}

pub fn join_answers(
    traces: impl IntoIterator<Item = ExecutionTrace>,
    answers: &BTreeMap<String, GroundTruth>,
) -> Result<Vec<Scenario>> {
    traces
        .into_iter()
        .map(|t| {
            let gt = answers
                .get(&t.scenario_id)
                .cloned()
                .ok_or_else(|| Error::MissingAnswers(t.scenario_id.clone()))?;
            Scenario::new(t, gt)
        })
        .collect()
}
