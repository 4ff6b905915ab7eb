//! Grid search over group weights and the position-weight sensitivity sweep.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{feature_vectors, FeatureConfig, FeatureVector};
use crate::graph::CausalGraph;
use crate::ranker::{score, WeightVector};
use crate::trace::{Scenario, StepId};

/// Features for one scenario, computed once and re-scored under many weights.
#[derive(Debug, Clone)]
pub struct PreparedScenario {
    pub scenario_id: String,
    pub root: StepId,
    pub features: BTreeMap<StepId, FeatureVector>,
}

impl PreparedScenario {
    pub fn new(s: &Scenario, config: &FeatureConfig, max_depth: usize) -> Result<Self> {
        let graph = CausalGraph::build(&s.trace);
        let cands = graph.backtrace(s.ground_truth.error_node_id, max_depth)?;
        Ok(PreparedScenario {
            scenario_id: s.id().to_string(),
            root: s.ground_truth.root_cause_node_id,
            features: feature_vectors(&s.trace, &graph, &cands, config),
        })
    }

    /// Highest-scoring candidate, earlier step on ties.
    pub fn top(&self, w: &WeightVector) -> StepId {
        let mut best = (0, f64::NEG_INFINITY);
        for (&v, fv) in &self.features {
            let s = score(&fv.group_scores, w);
            if s > best.1 {
                best = (v, s);
            }
        }
        best.0
    }

    pub fn hit(&self, w: &WeightVector) -> bool {
        self.top(w) == self.root
    }
}

pub fn prepare_all(scenarios: &[Scenario], config: &FeatureConfig, max_depth: usize) -> Result<Vec<PreparedScenario>> {
    scenarios
        .par_iter()
        .map(|s| PreparedScenario::new(s, config, max_depth))
        .collect()
}

fn hits(data: &[PreparedScenario], w: &WeightVector) -> usize {
    data.iter().filter(|p| p.hit(w)).count()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub position: Vec<f64>,
    pub structure: Vec<f64>,
    pub content: Vec<f64>,
    pub flow: Vec<f64>,
    pub confidence: Vec<f64>,
    pub sum_tolerance: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            position: vec![0.5, 0.6, 0.7, 0.8],
            structure: vec![0.1, 0.15, 0.2, 0.25],
            content: vec![0.03, 0.05, 0.07, 0.1],
            flow: vec![0.02, 0.03, 0.05],
            confidence: vec![0.01, 0.02, 0.03],
            sum_tolerance: 1e-9,
        }
    }
}

impl GridSpec {
    /// Every grid tuple whose components sum to one within tolerance, in
    /// nested-loop order.
    pub fn feasible_points(&self) -> Vec<[f64; 5]> {
        let mut out = Vec::new();
        for &p in &self.position {
            for &s in &self.structure {
                for &c in &self.content {
                    for &f in &self.flow {
                        for &e in &self.confidence {
                            let a = [p, s, c, f, e];
                            if (a.iter().sum::<f64>() - 1.0).abs() <= self.sum_tolerance {
                                out.push(a);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub weights: WeightVector,
    pub hit_at_1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    pub best: WeightVector,
    pub best_hit_at_1: f64,
    pub table: Vec<GridRow>,
}

/// Exhaustive search. The best point maximizes Hit@1; ties go to the larger
/// weight tuple compared lexicographically (position first).
pub fn grid_search(validation: &[PreparedScenario], grid: &GridSpec) -> Result<GridResult> {
    if validation.is_empty() {
        return Err(Error::EmptyBenchmark);
    }
    let points = grid.feasible_points();
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let counts: Vec<(WeightVector, usize)> = points
        .par_iter()
        .map(|a| {
            // Grid points may sum to one only within the grid tolerance.
            let w = WeightVector {
                position: a[0],
                structure: a[1],
                content: a[2],
                flow: a[3],
                confidence: a[4],
            };
            (w, hits(validation, &w))
        })
        .collect();
    let n = validation.len() as f64;
    let (best, best_hits) = counts
        .iter()
        .copied()
        .reduce(|a, b| {
            let better = b.1 > a.1
                || (b.1 == a.1 && b.0.as_array().partial_cmp(&a.0.as_array()) == Some(std::cmp::Ordering::Greater));
            if better {
                b
            } else {
                a
            }
        })
        .expect("non-empty");
    Ok(GridResult {
        best,
        best_hit_at_1: best_hits as f64 / n,
        table: counts
            .into_iter()
            .map(|(w, h)| GridRow {
                weights: w,
                hit_at_1: h as f64 / n,
            })
            .collect(),
    })
}

/// How the non-position weights move when the position weight changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Redistribution {
    /// The remaining mass is split in the base vector's ratios.
    #[default]
    Proportional,
    /// The base vector with its position weight replaced, rescaled to sum to one.
    Renormalize,
}

pub fn with_position_weight(base: &WeightVector, wp: f64, how: Redistribution) -> Result<WeightVector> {
    if wp == base.position {
        return Ok(*base);
    }
    let mut a = base.as_array();
    match how {
        Redistribution::Proportional => {
            let rest: f64 = a[1..].iter().sum();
            if rest <= 0.0 {
                return Err(Error::InvalidArgument("base vector has no non-position mass".into()));
            }
            for w in &mut a[1..] {
                *w *= (1.0 - wp) / rest;
            }
            a[0] = wp;
        }
        Redistribution::Renormalize => {
            a[0] = wp;
            let total: f64 = a.iter().sum();
            for w in &mut a {
                *w /= total;
            }
        }
    }
    WeightVector::from_array(a)
}

pub const SWEEP_POSITION_WEIGHTS: [f64; 5] = [0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub position_weight: f64,
    pub weights: WeightVector,
    pub hit_at_1: f64,
}

pub fn sensitivity_sweep(
    data: &[PreparedScenario],
    base: &WeightVector,
    position_weights: &[f64],
    how: Redistribution,
) -> Result<Vec<SweepRow>> {
    if data.is_empty() {
        return Err(Error::EmptyBenchmark);
    }
    position_weights
        .iter()
        .map(|&wp| {
            let w = with_position_weight(base, wp, how)?;
            Ok(SweepRow {
                position_weight: wp,
                weights: w,
                hit_at_1: hits(data, &w) as f64 / data.len() as f64,
            })
        })
        .collect()
}
