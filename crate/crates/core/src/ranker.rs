//! Weighted scoring of candidate nodes and the analysis report.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{feature_vectors, FeatureConfig, FeatureVector, Group, GroupScores};
use crate::graph::CausalGraph;
use crate::trace::{ExecutionTrace, StepId};

pub const DEFAULT_MAX_DEPTH: usize = 10;

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Group weights; non-negative and summing to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightVector {
    pub position: f64,
    pub structure: f64,
    pub content: f64,
    pub flow: f64,
    pub confidence: f64,
}

impl Default for WeightVector {
    fn default() -> Self {
        WeightVector {
            position: 0.70,
            structure: 0.20,
            content: 0.05,
            flow: 0.03,
            confidence: 0.02,
        }
    }
}

impl WeightVector {
    pub fn new(position: f64, structure: f64, content: f64, flow: f64, confidence: f64) -> Result<Self> {
        let w = WeightVector {
            position,
            structure,
            content,
            flow,
            confidence,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn from_array(a: [f64; 5]) -> Result<Self> {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.position, self.structure, self.content, self.flow, self.confidence]
    }

    pub fn get(&self, g: Group) -> f64 {
        self.as_array()[g.index()]
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.as_array();
        if let Some((i, w)) = a.iter().enumerate().find(|(_, w)| !(0.0..=1.0).contains(*w)) {
            return Err(Error::invariant(
                format!("weights.{}", Group::ALL[i].as_str()),
                format!("{w} is outside [0, 1]"),
            ));
        }
        let sum: f64 = a.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::invariant("weights", format!("weights sum to {sum}, not 1")));
        }
        Ok(())
    }

    /// Keeps only the listed groups and rescales them to sum to one.
    pub fn restricted_to(&self, groups: &[Group]) -> Result<Self> {
        let mut a = [0.0; 5];
        for &g in groups {
            a[g.index()] = self.get(g);
        }
        let total: f64 = a.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidArgument("ablation keeps no weight mass".into()));
        }
        for w in &mut a {
            *w /= total;
        }
        Self::from_array(a)
    }
}

/// Weighted sum of group scores.
pub fn score(groups: &GroupScores, weights: &WeightVector) -> f64 {
    Group::ALL
        .iter()
        .map(|&g| weights.get(g) * groups.get(g))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedCandidate {
    pub step_id: StepId,
    pub rank: usize,
    pub score: f64,
    pub groups: BTreeMap<&'static str, f64>,
    pub contributions: BTreeMap<&'static str, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedDiagnosis {
    pub error_node_id: StepId,
    pub candidate_count: usize,
    pub candidates: Vec<RankedCandidate>,
    pub features: BTreeMap<StepId, FeatureVector>,
}

impl RankedDiagnosis {
    pub fn top(&self) -> StepId {
        self.candidates[0].step_id
    }

    pub fn rank_of(&self, step: StepId) -> Option<usize> {
        self.candidates.iter().position(|c| c.step_id == step).map(|i| i + 1)
    }

    /// Candidates in rank order followed by the remaining steps in step
    /// order, so every step of the trace receives a rank.
    pub fn full_ordering(&self, trace_len: usize) -> Vec<StepId> {
        let mut order: Vec<StepId> = self.candidates.iter().map(|c| c.step_id).collect();
        order.extend((1..=trace_len).filter(|v| !self.features.contains_key(v)));
        order
    }
}

/// Sorts `(step, score)` pairs by descending score, earlier step first on ties.
pub fn order_by_score(scored: &mut [(StepId, f64)]) {
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
}

pub fn rank_candidates(
    error_node_id: StepId,
    features: BTreeMap<StepId, FeatureVector>,
    weights: &WeightVector,
) -> RankedDiagnosis {
    let mut scored: Vec<(StepId, f64)> = features
        .iter()
        .map(|(&v, fv)| (v, score(&fv.group_scores, weights)))
        .collect();
    order_by_score(&mut scored);
    let candidates = scored
        .iter()
        .enumerate()
        .map(|(i, &(v, s))| {
            let gs = &features[&v].group_scores;
            RankedCandidate {
                step_id: v,
                rank: i + 1,
                score: s,
                groups: gs.to_map(),
                contributions: Group::ALL
                    .iter()
                    .map(|&g| (g.as_str(), weights.get(g) * gs.get(g)))
                    .collect(),
            }
        })
        .collect();
    RankedDiagnosis {
        error_node_id,
        candidate_count: features.len(),
        candidates,
        features,
    }
}

/// Wall-clock time spent in each pipeline stage for one trace.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub graph: Duration,
    pub backtrace: Duration,
    pub features: Duration,
    pub ranking: Duration,
}

impl StageTimings {
    pub fn total(&self) -> Duration {
        self.graph + self.backtrace + self.features + self.ranking
    }
}

/// The full localization pipeline with fixed configuration.
#[derive(Debug, Clone)]
pub struct Analyzer {
    pub config: FeatureConfig,
    pub weights: WeightVector,
    pub max_depth: usize,
}

impl Default for Analyzer {
    fn default() -> Self {
        Analyzer {
            config: FeatureConfig::default(),
            weights: WeightVector::default(),
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

impl Analyzer {
    pub fn new(config: FeatureConfig, weights: WeightVector, max_depth: usize) -> Result<Self> {
        if max_depth == 0 {
            return Err(Error::InvalidArgument("max depth must be at least 1".into()));
        }
        config.validate()?;
        weights.validate()?;
        Ok(Analyzer {
            config,
            weights,
            max_depth,
        })
    }

    /// Error node used when none is supplied: the last step.
    pub fn default_error_node(trace: &ExecutionTrace) -> StepId {
        trace.len()
    }

    pub fn rank(&self, trace: &ExecutionTrace, error: StepId) -> Result<RankedDiagnosis> {
        self.rank_timed(trace, error).map(|(d, _)| d)
    }

    pub fn rank_timed(
        &self,
        trace: &ExecutionTrace,
        error: StepId,
    ) -> Result<(RankedDiagnosis, StageTimings)> {
        let t0 = Instant::now();
        let graph = CausalGraph::build(trace);
        let t1 = Instant::now();
        let candidates = graph.backtrace(error, self.max_depth)?;
        let t2 = Instant::now();
        let features = feature_vectors(trace, &graph, &candidates, &self.config);
        let t3 = Instant::now();
        let diagnosis = rank_candidates(error, features, &self.weights);
        let t4 = Instant::now();
        Ok((
            diagnosis,
            StageTimings {
                graph: t1 - t0,
                backtrace: t2 - t1,
                features: t3 - t2,
                ranking: t4 - t3,
            },
        ))
    }

    pub fn report(&self, trace: &ExecutionTrace, diagnosis: &RankedDiagnosis, explain: bool) -> AnalysisReport {
        AnalysisReport {
            scenario_id: trace.scenario_id.clone(),
            error_node_id: diagnosis.error_node_id,
            candidate_count: diagnosis.candidate_count,
            max_depth: self.max_depth,
            candidates: diagnosis.candidates.clone(),
            weights: self.weights,
            config_fingerprint: self.config.fingerprint(),
            features: explain.then(|| {
                diagnosis
                    .features
                    .iter()
                    .map(|(&v, fv)| {
                        (
                            v.to_string(),
                            NodeFeatures {
                                raw: fv.raw.to_map(),
                                normalized: fv.normalized.to_map(),
                            },
                        )
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeFeatures {
    pub raw: BTreeMap<&'static str, f64>,
    pub normalized: BTreeMap<&'static str, f64>,
}

/// JSON shape of `analysis.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub scenario_id: String,
    pub error_node_id: StepId,
    pub candidate_count: usize,
    pub max_depth: usize,
    pub candidates: Vec<RankedCandidate>,
    pub weights: WeightVector,
    pub config_fingerprint: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub features: Option<BTreeMap<String, NodeFeatures>>,
}

impl AnalysisReport {
    pub fn to_markdown(&self) -> String {
        let mut s = format!(
            "# Root cause analysis: {}\n\nError node: step {}. Candidates: {}.\n\n",
            self.scenario_id, self.error_node_id, self.candidate_count
        );
        s.push_str("| Rank | Step | Score | P | S | C | F | E |\n|---|---|---|---|---|---|---|---|\n");
        for c in &self.candidates {
            s.push_str(&format!("| {} | {} | {:.4} |", c.rank, c.step_id, c.score));
            for g in Group::ALL {
                s.push_str(&format!(" {:.4} |", c.contributions[g.as_str()]));
            }
            s.push('\n');
        }
        s
    }
}
