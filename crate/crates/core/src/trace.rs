//! Execution traces, scenarios, and their on-disk JSON formats.
//!
//! Two file shapes exist:
//!
//! * annotated `scenario.json`: trace fields plus a `ground_truth` object;
//! * blind `scenario.blind.json`: trace fields only, with an anonymized
//!   `scenario_id`. The matching ground truth lives in a separate answer key.
//!
//! Serialization is canonical: keys sorted, absent optional fields omitted,
//! two-space indentation, trailing newline. Steps are ordered by `step_id`;
//! timestamps are carried through but never interpreted.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 1-based chronological index of a step within its trace.
pub type StepId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionType {
    Plan,
    Code,
    Review,
    Execute,
    Message,
    Search,
    Analyze,
    Synthesize,
    Write,
    Validate,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Coding,
    CustomerService,
    Research,
    Planning,
    Trading,
    Healthcare,
    Legal,
    Education,
    Finance,
    Devops,
}

impl Domain {
    pub const ALL: [Domain; 10] = [
        Domain::Coding,
        Domain::CustomerService,
        Domain::Research,
        Domain::Planning,
        Domain::Trading,
        Domain::Healthcare,
        Domain::Legal,
        Domain::Education,
        Domain::Finance,
        Domain::Devops,
    ];

    /// Three-letter prefix used in generated scenario ids (`cod_034b23`).
    pub fn id_prefix(self) -> &'static str {
        match self {
            Domain::Coding => "cod",
            Domain::CustomerService => "cus",
            Domain::Research => "res",
            Domain::Planning => "pla",
            Domain::Trading => "trd",
            Domain::Healthcare => "hea",
            Domain::Legal => "leg",
            Domain::Education => "edu",
            Domain::Finance => "fin",
            Domain::Devops => "dev",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Domain::Coding => "Software Development",
            Domain::CustomerService => "Customer Service",
            Domain::Research => "Research Analysis",
            Domain::Planning => "Planning & Scheduling",
            Domain::Trading => "Financial Trading",
            Domain::Healthcare => "Healthcare Coordination",
            Domain::Legal => "Legal Document Analysis",
            Domain::Education => "Educational Tutoring",
            Domain::Finance => "Financial Advisory",
            Domain::Devops => "DevOps Automation",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Coding => "coding",
            Domain::CustomerService => "customer_service",
            Domain::Research => "research",
            Domain::Planning => "planning",
            Domain::Trading => "trading",
            Domain::Healthcare => "healthcare",
            Domain::Legal => "legal",
            Domain::Education => "education",
            Domain::Finance => "finance",
            Domain::Devops => "devops",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BugType {
    LogicError,
    CommunicationFailure,
    DataCorruption,
    MissingValidation,
    RoleConfusion,
}

impl BugType {
    pub const ALL: [BugType; 5] = [
        BugType::LogicError,
        BugType::CommunicationFailure,
        BugType::DataCorruption,
        BugType::MissingValidation,
        BugType::RoleConfusion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BugType::LogicError => "logic_error",
            BugType::CommunicationFailure => "communication_failure",
            BugType::DataCorruption => "data_corruption",
            BugType::MissingValidation => "missing_validation",
            BugType::RoleConfusion => "role_confusion",
        }
    }
}

impl fmt::Display for BugType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub step_id: StepId,
    pub agent: String,
    pub action_type: ActionType,
    pub input: String,
    pub output: String,
    pub timestamp: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub produces: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consumes: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionTrace {
    pub scenario_id: String,
    pub domain: Domain,
    pub agents: Vec<String>,
    pub steps: Vec<Step>,
}

impl ExecutionTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Step by 1-based id. Panics on an id outside `1..=len`.
    pub fn step(&self, id: StepId) -> &Step {
        &self.steps[id - 1]
    }

    pub fn step_ids(&self) -> impl Iterator<Item = StepId> + '_ {
        self.steps.iter().map(|s| s.step_id)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps.is_empty() {
            return Err(Error::invariant("steps", "trace must contain at least one step"));
        }
        for (i, step) in self.steps.iter().enumerate() {
            let path = format!("steps[{i}]");
            if step.step_id != i + 1 {
                return Err(Error::invariant(
                    format!("{path}.step_id"),
                    format!("expected {} (ids must be 1..n contiguous), found {}", i + 1, step.step_id),
                ));
            }
            if !self.agents.iter().any(|a| a == &step.agent) {
                return Err(Error::invariant(
                    format!("{path}.agent"),
                    format!("agent {:?} is not listed in `agents`", step.agent),
                ));
            }
            if let Some(c) = step.confidence {
                if !(0.0..=1.0).contains(&c) || c.is_nan() {
                    return Err(Error::invariant(
                        format!("{path}.confidence"),
                        format!("{c} is outside [0, 1]"),
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruth {
    pub error_node_id: StepId,
    pub root_cause_node_id: StepId,
    pub bug_type: BugType,
    pub bug_description: String,
}

impl GroundTruth {
    fn validate(&self, trace_len: usize) -> Result<()> {
        for (field, id) in [
            ("ground_truth.error_node_id", self.error_node_id),
            ("ground_truth.root_cause_node_id", self.root_cause_node_id),
        ] {
            if id == 0 || id > trace_len {
                return Err(Error::invariant(
                    field,
                    format!("step {id} does not exist in a trace of {trace_len} steps"),
                ));
            }
        }
        if self.root_cause_node_id > self.error_node_id {
            return Err(Error::invariant(
                "ground_truth.root_cause_node_id",
                format!(
                    "root cause {} comes after error node {}",
                    self.root_cause_node_id, self.error_node_id
                ),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub trace: ExecutionTrace,
    pub ground_truth: GroundTruth,
}

impl Scenario {
    pub fn new(trace: ExecutionTrace, ground_truth: GroundTruth) -> Result<Self> {
        trace.validate()?;
        ground_truth.validate(trace.len())?;
        Ok(Scenario { trace, ground_truth })
    }

    pub fn id(&self) -> &str {
        &self.trace.scenario_id
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioWire {
    scenario_id: String,
    domain: Domain,
    agents: Vec<String>,
    steps: Vec<Step>,
    ground_truth: GroundTruth,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceWire {
    scenario_id: String,
    domain: Domain,
    agents: Vec<String>,
    steps: Vec<Step>,
}

impl From<TraceWire> for ExecutionTrace {
    fn from(w: TraceWire) -> Self {
        ExecutionTrace {
            scenario_id: w.scenario_id,
            domain: w.domain,
            agents: w.agents,
            steps: w.steps,
        }
    }
}

fn parse_value(bytes: &[u8]) -> Result<serde_json::Value> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::MalformedJson(e.to_string()))?;
    serde_json::from_str(text).map_err(|e| Error::MalformedJson(e.to_string()))
}

fn from_value<T: DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        Error::schema(path, e.into_inner().to_string())
    })
}

/// Parses an annotated scenario and checks every trace and ground-truth invariant.
pub fn parse_scenario(bytes: &[u8]) -> Result<Scenario> {
    let wire: ScenarioWire = from_value(parse_value(bytes)?)?;
    Scenario::new(
        ExecutionTrace {
            scenario_id: wire.scenario_id,
            domain: wire.domain,
            agents: wire.agents,
            steps: wire.steps,
        },
        wire.ground_truth,
    )
}

/// Parses a blind trace. Any `ground_truth` key is rejected so analysis code
/// cannot see the answer.
pub fn parse_trace_blind(bytes: &[u8]) -> Result<ExecutionTrace> {
    let value = parse_value(bytes)?;
    if value.get("ground_truth").is_some() {
        return Err(Error::schema(
            "ground_truth",
            "blind traces must not carry ground truth",
        ));
    }
    let trace: ExecutionTrace = from_value::<TraceWire>(value)?.into();
    trace.validate()?;
    Ok(trace)
}

/// Parses either file shape, returning ground truth when present.
pub fn parse_any(bytes: &[u8]) -> Result<(ExecutionTrace, Option<GroundTruth>)> {
    let value = parse_value(bytes)?;
    if value.get("ground_truth").is_some() {
        let s = parse_scenario(bytes)?;
        Ok((s.trace, Some(s.ground_truth)))
    } else {
        let trace: ExecutionTrace = from_value::<TraceWire>(value)?.into();
        trace.validate()?;
        Ok((trace, None))
    }
}

/// Pretty-prints any serializable value in canonical form: sorted keys,
/// two-space indent, trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Vec<u8> {
    // Round-tripping through `Value` sorts object keys (BTreeMap-backed).
    let value = serde_json::to_value(value).expect("in-memory values always serialize");
    let mut out = serde_json::to_vec_pretty(&value).expect("Value always serializes");
    out.push(b'\n');
    out
}

pub fn serialize_scenario(s: &Scenario) -> Vec<u8> {
    to_canonical_json(&ScenarioWireRef {
        scenario_id: &s.trace.scenario_id,
        domain: s.trace.domain,
        agents: &s.trace.agents,
        steps: &s.trace.steps,
        ground_truth: Some(&s.ground_truth),
    })
}

pub fn serialize_trace(t: &ExecutionTrace) -> Vec<u8> {
    to_canonical_json(&ScenarioWireRef {
        scenario_id: &t.scenario_id,
        domain: t.domain,
        agents: &t.agents,
        steps: &t.steps,
        ground_truth: None,
    })
}

#[derive(Serialize)]
struct ScenarioWireRef<'a> {
    scenario_id: &'a str,
    domain: Domain,
    agents: &'a [String],
    steps: &'a [Step],
    #[serde(skip_serializing_if = "Option::is_none")]
    ground_truth: Option<&'a GroundTruth>,
}
