//! Benchmark evaluation: per-method metrics, significance, stratified
//! tables, ablations, and the checks behind `evaluate --check`.

mod check;
mod report;
mod runtime;

pub use check::{check_evaluation, CheckLine};
pub use report::render_report;
pub use runtime::{linear_fit, runtime_bench, LinearFit, RuntimeReport, RuntimeRow, StageStat, BENCH_SIZES};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::{
    classify_miss, first_node_baseline, last_node_baseline, llm_baseline, random_baseline, CompletionAdapter,
    MissCategory, DECODING,
};
use crate::error::{Error, Result};
use crate::features::Group;
use crate::ranker::{Analyzer, StageTimings, WeightVector};
use crate::stats::{
    bootstrap_ci, cohens_h, effect_label, format_p_value, hit_at_k, mcnemar, mrr, Contingency,
    DEFAULT_BOOTSTRAP_ITERATIONS, DEFAULT_BOOTSTRAP_SEED, DEFAULT_CONFIDENCE,
};
use crate::trace::{Scenario, StepId};
use crate::weights::{prepare_all, sensitivity_sweep, Redistribution, SweepRow, SWEEP_POSITION_WEIGHTS};

pub const DEFAULT_RANDOM_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    AgentTrace,
    Llm,
    Last,
    Random,
    First,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::AgentTrace, Method::Llm, Method::Last, Method::Random, Method::First];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::AgentTrace => "agenttrace",
            Method::Llm => "llm",
            Method::Last => "last",
            Method::Random => "random",
            Method::First => "first",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

pub struct EvalOptions<'a> {
    pub analyzer: Analyzer,
    pub methods: Vec<Method>,
    pub random_seed: u64,
    pub bootstrap_iterations: usize,
    pub bootstrap_seed: u64,
    pub confidence: f64,
    pub adapter: Option<&'a (dyn CompletionAdapter + Sync)>,
    pub redistribution: Redistribution,
}

impl Default for EvalOptions<'_> {
    fn default() -> Self {
        EvalOptions {
            analyzer: Analyzer::default(),
            methods: vec![Method::AgentTrace, Method::Last, Method::Random, Method::First],
            random_seed: DEFAULT_RANDOM_SEED,
            bootstrap_iterations: DEFAULT_BOOTSTRAP_ITERATIONS,
            bootstrap_seed: DEFAULT_BOOTSTRAP_SEED,
            confidence: DEFAULT_CONFIDENCE,
            adapter: None,
            redistribution: Redistribution::Proportional,
        }
    }
}

/// One method's result on one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub predicted: StepId,
    pub rank: usize,
}

impl Outcome {
    pub fn correct(&self) -> bool {
        self.rank == 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodMetrics {
    pub n: usize,
    pub hit_at_1: f64,
    pub hit_at_3: f64,
    pub hit_at_5: f64,
    pub mrr: f64,
    pub hit_at_1_ci: (f64, f64),
    pub mrr_ci: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumMetrics {
    pub n: usize,
    pub hit_at_1: f64,
    pub hit_at_3: f64,
    pub hit_at_5: f64,
    pub mrr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSignificance {
    pub first: Method,
    pub second: Method,
    pub n00: usize,
    pub n01: usize,
    pub n10: usize,
    pub n11: usize,
    /// `None` when the methods never disagree.
    pub chi_square: Option<f64>,
    pub p_value: Option<f64>,
    pub p_value_text: String,
    pub cohens_h: f64,
    pub effect: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationRow {
    pub groups: String,
    pub weights: WeightVector,
    pub hit_at_1: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LlmSummary {
    pub temperature: f64,
    pub max_tokens: u32,
    pub top_p: f64,
    pub unparseable: usize,
    pub misses: BTreeMap<MissCategory, usize>,
}

/// Scenario attributes used for stratification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioInfo {
    pub scenario_id: String,
    pub domain: String,
    pub bug_type: String,
    pub length: usize,
    pub root: StepId,
    pub error: StepId,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    pub scenario_count: usize,
    pub methods: BTreeMap<Method, MethodMetrics>,
    /// Stratified tables for the main method, keyed by dimension then stratum.
    pub stratified: BTreeMap<&'static str, BTreeMap<String, StratumMetrics>>,
    pub ablations: Vec<AblationRow>,
    pub sensitivity: Vec<SweepRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub llm: Option<LlmSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohensHCheck {
    pub p1: f64,
    pub p2: f64,
    pub computed: f64,
    pub reported: f64,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Significance {
    pub pairs: Vec<PairSignificance>,
    pub cohens_h_check: CohensHCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanStd {
    pub mean_ms: f64,
    pub std_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalTimings {
    pub wall_clock_s: f64,
    pub per_trace: BTreeMap<&'static str, MeanStd>,
}

/// Everything one evaluation run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub info: Vec<ScenarioInfo>,
    pub outcomes: BTreeMap<Method, Vec<Outcome>>,
    pub metrics: Metrics,
    pub significance: Significance,
    pub timings: EvalTimings,
}

pub fn length_stratum(len: usize) -> &'static str {
    match len {
        0..=7 => "<8",
        8..=9 => "8-9",
        10..=11 => "10-11",
        12..=13 => "12-13",
        14..=15 => "14-15",
        _ => ">15",
    }
}

/// Position stratum of a root cause; step 1 counts as early.
pub fn position_stratum(root: StepId) -> &'static str {
    match root {
        0..=3 => "early",
        4..=6 => "middle",
        _ => "late",
    }
}

/// Group subsets evaluated in the ablation table.
pub const ABLATIONS: [&str; 14] = [
    "P+S+C+F+E",
    "P",
    "S",
    "C",
    "F",
    "E",
    "P+S",
    "P+C",
    "P+F",
    "P+E",
    "S+C",
    "S+F",
    "P+S+C",
    "P+S+C+F",
];

pub fn parse_groups(label: &str) -> Result<Vec<Group>> {
    label
        .split('+')
        .map(|s| {
            Group::ALL
                .into_iter()
                .find(|g| g.short().to_string() == s)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown group {s:?}")))
        })
        .collect()
}

fn outcome_from_ranking(ranking: &[StepId], root: StepId) -> Outcome {
    Outcome {
        predicted: ranking[0],
        rank: ranking.iter().position(|&v| v == root).map_or(ranking.len() + 1, |i| i + 1),
    }
}

fn ranks(outs: &[Outcome]) -> Vec<usize> {
    outs.iter().map(|o| o.rank).collect()
}

fn stratum_metrics(outs: &[&Outcome]) -> Result<StratumMetrics> {
    let r: Vec<usize> = outs.iter().map(|o| o.rank).collect();
    Ok(StratumMetrics {
        n: r.len(),
        hit_at_1: hit_at_k(&r, 1)?,
        hit_at_3: hit_at_k(&r, 3)?,
        hit_at_5: hit_at_k(&r, 5)?,
        mrr: mrr(&r)?,
    })
}

fn mean_std(xs: &[f64]) -> MeanStd {
    let n = xs.len().max(1) as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    MeanStd {
        mean_ms: mean,
        std_ms: var.sqrt(),
    }
}

type StratumKey = fn(&ScenarioInfo) -> String;

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Runs every requested method over `scenarios` and aggregates. Scenarios
/// are processed in scenario-id order, so results do not depend on input
/// order or thread count.
pub fn evaluate(scenarios: &[Scenario], opts: &EvalOptions<'_>) -> Result<Evaluation> {
    if scenarios.is_empty() {
        return Err(Error::EmptyBenchmark);
    }
    let started = std::time::Instant::now();
    let mut sorted: Vec<&Scenario> = scenarios.iter().collect();
    sorted.sort_by(|a, b| a.id().cmp(b.id()));

    let info: Vec<ScenarioInfo> = sorted
        .iter()
        .map(|s| ScenarioInfo {
            scenario_id: s.id().to_string(),
            domain: s.trace.domain.as_str().to_string(),
            bug_type: s.ground_truth.bug_type.as_str().to_string(),
            length: s.trace.len(),
            root: s.ground_truth.root_cause_node_id,
            error: s.ground_truth.error_node_id,
        })
        .collect();

    let mut methods = opts.methods.clone();
    methods.sort();
    methods.dedup();
    if !methods.contains(&Method::AgentTrace) {
        return Err(Error::InvalidArgument("the method list must include agenttrace".into()));
    }

    let mut outcomes: BTreeMap<Method, Vec<Outcome>> = BTreeMap::new();
    let mut stage_times: Vec<StageTimings> = Vec::new();
    let mut llm_summary = None;
    for &m in &methods {
        let outs: Vec<Outcome> = match m {
            Method::AgentTrace => {
                let res: Result<Vec<(Outcome, StageTimings)>> = sorted
                    .par_iter()
                    .map(|s| {
                        let (d, t) = opts.analyzer.rank_timed(&s.trace, s.ground_truth.error_node_id)?;
                        let order = d.full_ordering(s.trace.len());
                        Ok((outcome_from_ranking(&order, s.ground_truth.root_cause_node_id), t))
                    })
                    .collect();
                let (o, t): (Vec<_>, Vec<_>) = res?.into_iter().unzip();
                stage_times = t;
                o
            }
            Method::Random => sorted
                .par_iter()
                .map(|s| {
                    let p = random_baseline(&s.trace, opts.random_seed);
                    outcome_from_ranking(&p.ranking, s.ground_truth.root_cause_node_id)
                })
                .collect(),
            Method::First => sorted
                .iter()
                .map(|s| outcome_from_ranking(&first_node_baseline(&s.trace).ranking, s.ground_truth.root_cause_node_id))
                .collect(),
            Method::Last => sorted
                .iter()
                .map(|s| {
                    let p = last_node_baseline(&s.trace, s.ground_truth.error_node_id);
                    outcome_from_ranking(&p.ranking, s.ground_truth.root_cause_node_id)
                })
                .collect(),
            Method::Llm => {
                let adapter = opts
                    .adapter
                    .ok_or_else(|| Error::InvalidArgument("the llm method needs an adapter or fixture".into()))?;
                let mut summary = LlmSummary {
                    temperature: DECODING.temperature,
                    max_tokens: DECODING.max_tokens,
                    top_p: DECODING.top_p,
                    unparseable: 0,
                    misses: BTreeMap::new(),
                };
                let mut outs = Vec::with_capacity(sorted.len());
                for s in &sorted {
                    let gt = &s.ground_truth;
                    let p = llm_baseline(&s.trace, gt.error_node_id, adapter)?;
                    summary.unparseable += usize::from(p.unparseable.is_some());
                    let o = outcome_from_ranking(&p.prediction.ranking, gt.root_cause_node_id);
                    if let Some(c) = classify_miss(o.predicted, gt.root_cause_node_id, gt.error_node_id) {
                        *summary.misses.entry(c).or_default() += 1;
                    }
                    outs.push(o);
                }
                llm_summary = Some(summary);
                outs
            }
        };
        outcomes.insert(m, outs);
    }

    let mut method_metrics = BTreeMap::new();
    for (&m, outs) in &outcomes {
        let r = ranks(outs);
        let hits: Vec<f64> = outs.iter().map(|o| f64::from(u8::from(o.correct()))).collect();
        let recips: Vec<f64> = r.iter().map(|&k| 1.0 / k as f64).collect();
        let ci = |xs: &[f64]| bootstrap_ci(xs, opts.bootstrap_iterations, opts.confidence, opts.bootstrap_seed);
        method_metrics.insert(
            m,
            MethodMetrics {
                n: r.len(),
                hit_at_1: hit_at_k(&r, 1)?,
                hit_at_3: hit_at_k(&r, 3)?,
                hit_at_5: hit_at_k(&r, 5)?,
                mrr: mrr(&r)?,
                hit_at_1_ci: ci(&hits)?,
                mrr_ci: ci(&recips)?,
            },
        );
    }

    let main = &outcomes[&Method::AgentTrace];
    let mut stratified = BTreeMap::new();
    let dims: [(&str, StratumKey); 4] = [
        ("bug_type", |i| i.bug_type.clone()),
        ("trace_length", |i| length_stratum(i.length).to_string()),
        ("bug_position", |i| position_stratum(i.root).to_string()),
        ("domain", |i| i.domain.clone()),
    ];
    for (name, key) in dims.iter() {
        let mut groups: BTreeMap<String, Vec<&Outcome>> = BTreeMap::new();
        for (i, o) in info.iter().zip(main) {
            groups.entry(key(i)).or_default().push(o);
        }
        let table = groups
            .into_iter()
            .map(|(k, v)| Ok((k, stratum_metrics(&v)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        stratified.insert(*name, table);
    }

    let owned: Vec<Scenario> = sorted.iter().map(|s| (*s).clone()).collect();
    let prepared = prepare_all(&owned, &opts.analyzer.config, opts.analyzer.max_depth)?;
    let n = prepared.len() as f64;
    let full_hit = method_metrics[&Method::AgentTrace].hit_at_1;
    let ablations = ABLATIONS
        .iter()
        .map(|label| {
            let w = opts.analyzer.weights.restricted_to(&parse_groups(label)?)?;
            let h = prepared.iter().filter(|p| p.hit(&w)).count() as f64 / n;
            Ok(AblationRow {
                groups: label.to_string(),
                weights: w,
                hit_at_1: h,
                delta: h - full_hit,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sensitivity = sensitivity_sweep(&prepared, &opts.analyzer.weights, &SWEEP_POSITION_WEIGHTS, opts.redistribution)?;

    let mut pairs = Vec::new();
    for (i, &a) in methods.iter().enumerate() {
        for &b in &methods[i + 1..] {
            let ca: Vec<bool> = outcomes[&a].iter().map(Outcome::correct).collect();
            let cb: Vec<bool> = outcomes[&b].iter().map(Outcome::correct).collect();
            let t = Contingency::from_outcomes(&ca, &cb);
            let (chi, p) = match mcnemar(t.n01, t.n10) {
                Ok((c, p)) => (Some(c), Some(p)),
                Err(Error::DegenerateTable) => (None, None),
                Err(e) => return Err(e),
            };
            let h = cohens_h(method_metrics[&a].hit_at_1, method_metrics[&b].hit_at_1);
            pairs.push(PairSignificance {
                first: a,
                second: b,
                n00: t.n00,
                n01: t.n01,
                n10: t.n10,
                n11: t.n11,
                chi_square: chi,
                p_value: p,
                p_value_text: p.map_or_else(|| "n/a".to_string(), format_p_value),
                cohens_h: h,
                effect: effect_label(h),
            });
        }
    }
    let computed = cohens_h(0.949, 0.685);
    let significance = Significance {
        pairs,
        cohens_h_check: CohensHCheck {
            p1: 0.949,
            p2: 0.685,
            computed,
            reported: 0.77,
            difference: 0.77 - computed,
        },
    };

    let stage = |f: fn(&StageTimings) -> Duration| mean_std(&stage_times.iter().map(|t| ms(f(t))).collect::<Vec<_>>());
    let per_trace = BTreeMap::from([
        ("graph_construction", stage(|t| t.graph)),
        ("backtrace", stage(|t| t.backtrace)),
        ("feature_extraction", stage(|t| t.features)),
        ("ranking", stage(|t| t.ranking)),
        ("total", stage(|t| t.total())),
    ]);

    Ok(Evaluation {
        info,
        outcomes,
        metrics: Metrics {
            scenario_count: sorted.len(),
            methods: method_metrics,
            stratified,
            ablations,
            sensitivity,
            llm: llm_summary,
        },
        significance,
        timings: EvalTimings {
            wall_clock_s: started.elapsed().as_secs_f64(),
            per_trace,
        },
    })
}
