//! Root cause localization for multi-agent execution traces.
//!
//! The pipeline builds a causal graph over the steps of a trace, walks it
//! backwards from the step where the failure surfaced, scores each upstream
//! candidate on interpretable features, and ranks them.

pub mod baselines;
pub mod benchgen;
pub mod error;
pub mod eval;
pub mod features;
pub mod graph;
pub mod ranker;
pub mod stats;
pub mod trace;
pub mod weights;

pub use baselines::{CommandAdapter, CompletionAdapter, Prediction, ReplayAdapter};
pub use benchgen::{generate_benchmark, make_blind, verify_ground_truth, GeneratedScenario, Manifest};
pub use error::{Error, Result};
pub use eval::{evaluate, EvalOptions, Evaluation, Method};
pub use features::{Feature, FeatureConfig, FeatureVector, Group, Orientation};
pub use graph::{CandidateSet, CausalGraph, Edge, EdgeKind};
pub use ranker::{Analyzer, AnalysisReport, RankedDiagnosis, WeightVector, DEFAULT_MAX_DEPTH};
pub use trace::{
    parse_any, parse_scenario, parse_trace_blind, serialize_scenario, serialize_trace, to_canonical_json,
    ActionType, BugType, Domain, ExecutionTrace, GroundTruth, Scenario, Step, StepId,
};
pub use weights::{grid_search, sensitivity_sweep, GridSpec, PreparedScenario};
