//! Comparison methods that produce full rankings over a trace's steps.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::{Command, Stdio};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::trace::{ExecutionTrace, StepId};

/// A full ranking of a trace's steps, most suspicious first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub method: String,
    pub ranking: Vec<StepId>,
}

impl Prediction {
    pub fn top(&self) -> StepId {
        self.ranking[0]
    }

    pub fn rank_of(&self, step: StepId) -> Option<usize> {
        self.ranking.iter().position(|&v| v == step).map(|i| i + 1)
    }

    pub fn is_permutation_of(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        self.ranking.len() == n
            && self
                .ranking
                .iter()
                .all(|&v| v >= 1 && v <= n && !std::mem::replace(&mut seen[v - 1], true))
    }
}

fn scenario_seed(scenario_id: &str, seed: u64) -> u64 {
    let d = Sha256::digest(scenario_id.as_bytes());
    seed ^ u64::from_le_bytes(d[..8].try_into().expect("digest has 32 bytes"))
}

/// Uniformly random permutation, deterministic per (scenario id, seed).
pub fn random_baseline(trace: &ExecutionTrace, seed: u64) -> Prediction {
    let mut rng = ChaCha8Rng::seed_from_u64(scenario_seed(&trace.scenario_id, seed));
    let mut ranking: Vec<StepId> = trace.step_ids().collect();
    ranking.shuffle(&mut rng);
    Prediction {
        method: "random".into(),
        ranking,
    }
}

pub fn first_node_baseline(trace: &ExecutionTrace) -> Prediction {
    Prediction {
        method: "first".into(),
        ranking: trace.step_ids().collect(),
    }
}

/// The step just before the error first, walking backwards, then the error
/// node, then anything after it.
pub fn last_node_baseline(trace: &ExecutionTrace, error: StepId) -> Prediction {
    Prediction {
        method: "last".into(),
        ranking: last_node_ordering(trace.len(), error),
    }
}

fn last_node_ordering(n: usize, error: StepId) -> Vec<StepId> {
    (1..error).rev().chain(error..=n).collect()
}

/// Decoding parameters recorded with every LLM run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecodingParams {
    pub temperature: f64,
    pub max_tokens: u32,
    pub top_p: f64,
}

pub const DECODING: DecodingParams = DecodingParams {
    temperature: 0.0,
    max_tokens: 1024,
    top_p: 1.0,
};

const PROMPT_TEMPLATE: &str = "You are an expert debugger analyzing a multi-agent system
execution trace. The system encountered an error.
Your task is to identify the ROOT CAUSE - the earliest
step where something went wrong that led to the final error.
## Execution Trace:
{trace_content}
## Error Description:
The system failed at step {error_step}: {error_description}
## Instructions:
1. Analyze the execution trace carefully
2. Identify causal relationships between steps
3. Find the EARLIEST step that caused the error
4. Consider: logic errors, miscommunication,
   data issues, missing validation
## Output Format:
Respond with ONLY the step number, e.g., \"3\"
Root cause step:";

pub fn render_trace(trace: &ExecutionTrace) -> String {
    trace
        .steps
        .iter()
        .map(|s| {
            format!(
                "Step {} [{}] ({}):\n  Input: {}\n  Output: {}",
                s.step_id,
                s.agent,
                serde_json::to_value(s.action_type)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                s.input,
                s.output
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn build_prompt(trace: &ExecutionTrace, error: StepId) -> String {
    PROMPT_TEMPLATE
        .replace("{trace_content}", &render_trace(trace))
        .replace("{error_step}", &error.to_string())
        .replace("{error_description}", &trace.step(error).output)
}

/// Strict parse: the completion, after trimming whitespace and an optional
/// opening quote, must start with a step number inside the trace.
pub fn parse_step_number(completion: &str, n: usize) -> Result<StepId> {
    let t = completion.trim_start();
    let t = t.strip_prefix('"').unwrap_or(t);
    let digits: String = t.chars().take_while(|c| c.is_ascii_digit()).collect();
    match digits.parse::<StepId>() {
        Ok(v) if (1..=n).contains(&v) => Ok(v),
        _ => Err(Error::UnparseableCompletion(completion.chars().take(80).collect())),
    }
}

pub trait CompletionAdapter {
    fn complete(&self, scenario_id: &str, prompt: &str) -> Result<String>;
}

/// Runs an external program: prompt on stdin, completion on stdout.
#[derive(Debug, Clone)]
pub struct CommandAdapter {
    pub program: String,
    pub args: Vec<String>,
}

impl CompletionAdapter for CommandAdapter {
    fn complete(&self, _scenario_id: &str, prompt: &str) -> Result<String> {
        let fail = |e: std::io::Error| Error::AdapterFailure(format!("{}: {e}", self.program));
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(fail)?;
        child
            .stdin
            .take()
            .expect("stdin is piped")
            .write_all(prompt.as_bytes())
            .map_err(fail)?;
        let out = child.wait_with_output().map_err(fail)?;
        if !out.status.success() {
            return Err(Error::AdapterFailure(format!(
                "{} exited with {}: {}",
                self.program,
                out.status,
                String::from_utf8_lossy(&out.stderr).trim()
            )));
        }
        String::from_utf8(out.stdout).map_err(|e| Error::AdapterFailure(e.to_string()))
    }
}

/// Canned completions keyed by scenario id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReplayAdapter {
    pub completions: BTreeMap<String, String>,
}

impl ReplayAdapter {
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::MalformedJson(e.to_string()))
    }
}

impl CompletionAdapter for ReplayAdapter {
    fn complete(&self, scenario_id: &str, _prompt: &str) -> Result<String> {
        self.completions
            .get(scenario_id)
            .cloned()
            .ok_or_else(|| Error::AdapterFailure(format!("no fixture for scenario {scenario_id}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LlmPrediction {
    pub prediction: Prediction,
    pub completion: String,
    /// Set when the completion could not be parsed and the last-node
    /// ordering was used instead.
    pub unparseable: Option<Error>,
}

pub fn llm_baseline(trace: &ExecutionTrace, error: StepId, adapter: &dyn CompletionAdapter) -> Result<LlmPrediction> {
    let prompt = build_prompt(trace, error);
    let completion = adapter.complete(&trace.scenario_id, &prompt)?;
    let n = trace.len();
    let (ranking, unparseable) = match parse_step_number(&completion, n) {
        Ok(v) => (
            std::iter::once(v).chain((1..=n).filter(|&s| s != v)).collect(),
            None,
        ),
        Err(e) => {
            log::warn!("{}: {e}; falling back to last-node ordering", trace.scenario_id);
            (last_node_ordering(n, error), Some(e))
        }
    };
    Ok(LlmPrediction {
        prediction: Prediction {
            method: "llm".into(),
            ranking,
        },
        completion,
        unparseable,
    })
}

/// How a wrong rank-1 prediction relates to the ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MissCategory {
    SelectedErrorNode,
    OffByOne,
    Intermediate,
    CompletelyIncorrect,
}

/// Classifies a wrong prediction; `None` when the prediction is correct.
pub fn classify_miss(predicted: StepId, root: StepId, error: StepId) -> Option<MissCategory> {
    if predicted == root {
        None
    } else if predicted == error {
        Some(MissCategory::SelectedErrorNode)
    } else if predicted.abs_diff(root) == 1 {
        Some(MissCategory::OffByOne)
    } else if root < predicted && predicted < error {
        Some(MissCategory::Intermediate)
    } else {
        Some(MissCategory::CompletelyIncorrect)
    }
}
