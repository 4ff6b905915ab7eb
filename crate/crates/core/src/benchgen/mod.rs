//! Deterministic synthetic benchmark: clean traces from domain templates,
//! one injected bug per scenario, cascading effects, and ground truth.

mod blind;
mod inject;
mod synthetic;
mod templates;
mod verify;

pub use blind::{blind_id, join_answers, make_blind, BlindBenchmark, BlindScenario};
pub use inject::{build_mutation, cascade_note, flip_operator, Mutation, MutationKind, StepSlots};
pub use synthetic::synthetic_trace;
pub use templates::{DomainTemplate, Pattern, StepPlan};
pub use verify::{verify_ground_truth, VerificationReport};

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{CausalGraph, EdgeKind};
use crate::trace::{BugType, Domain, ExecutionTrace, GroundTruth, Scenario, Step, StepId};

pub const GENERATOR_VERSION: &str = "tracefault-benchgen/1";
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SPLIT_SEED: u64 = 2024;
pub const VALIDATION_PER_DOMAIN: usize = 5;

pub const DEFAULT_COUNTS: [(Domain, usize); 10] = [
    (Domain::Coding, 52),
    (Domain::CustomerService, 51),
    (Domain::Research, 51),
    (Domain::Planning, 46),
    (Domain::Trading, 50),
    (Domain::Healthcare, 60),
    (Domain::Legal, 60),
    (Domain::Education, 60),
    (Domain::Finance, 60),
    (Domain::Devops, 60),
];

/// Target share of each bug type, in `BugType::ALL` order.
pub const BUG_TYPE_SHARES: [f64; 5] = [0.30, 0.20, 0.20, 0.16, 0.14];
/// Target share of each location bucket, in `LocationBucket::ALL` order.
pub const BUCKET_SHARES: [f64; 3] = [0.60, 0.30, 0.10];

/// Relative frequency of trace lengths 8 through 15.
const LENGTH_WEIGHTS: [u32; 8] = [14, 16, 16, 14, 12, 10, 10, 8];
const MIN_LEN: usize = 8;
const MAX_RESAMPLES: usize = 32;

/// Probability that a hand-off step explicitly consumes the previous artifact.
const HANDOFF_CONSUME_P: f64 = 0.35;
/// Probability that the closing step re-reads the opening artifact.
const RECALL_P: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocationBucket {
    Early,
    Middle,
    Late,
}

impl LocationBucket {
    pub const ALL: [LocationBucket; 3] = [LocationBucket::Early, LocationBucket::Middle, LocationBucket::Late];

    pub fn of_step(step: StepId) -> Option<Self> {
        match step {
            2..=3 => Some(LocationBucket::Early),
            4..=6 => Some(LocationBucket::Middle),
            s if s >= 7 => Some(LocationBucket::Late),
            _ => None,
        }
    }

    /// Step range covered by the bucket in a trace of `len` steps.
    pub fn range(self, len: usize) -> std::ops::RangeInclusive<StepId> {
        match self {
            LocationBucket::Early => 2..=3.min(len),
            LocationBucket::Middle => 4..=6.min(len),
            LocationBucket::Late => 7..=len,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LocationBucket::Early => "early",
            LocationBucket::Middle => "middle",
            LocationBucket::Late => "late",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BugSpec {
    pub bug_type: BugType,
    pub bucket: LocationBucket,
    pub step: StepId,
    pub mutation: MutationKind,
    pub seed: u64,
}

/// A scenario together with what the generator knows about it.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedScenario {
    pub scenario: Scenario,
    /// The trace before injection.
    pub clean: ExecutionTrace,
    pub bug: BugSpec,
    pub mutation: Mutation,
}

/// Splits `total` into integer counts matching `shares` (largest remainder).
pub fn quota(shares: &[f64], total: usize) -> Vec<usize> {
    let exact: Vec<f64> = shares.iter().map(|s| s * total as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let short = total - counts.iter().sum::<usize>();
    for &i in order.iter().take(short) {
        counts[i] += 1;
    }
    counts
}

fn shuffled_assignment<T: Copy, R: Rng>(items: &[T], counts: &[usize], rng: &mut R) -> Vec<T> {
    let mut v: Vec<T> = items
        .iter()
        .zip(counts)
        .flat_map(|(&t, &c)| std::iter::repeat_n(t, c))
        .collect();
    v.shuffle(rng);
    v
}

/// Generates the evaluation benchmark. Bug types and location buckets are
/// assigned by quota and shuffled, so the marginals hit their targets
/// exactly; everything else is drawn from a per-scenario stream seeded with
/// `seed ^ index`.
pub fn generate_benchmark(seed: u64, counts: &[(Domain, usize)]) -> Result<Vec<GeneratedScenario>> {
    let total: usize = counts.iter().map(|(_, c)| c).sum();
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let bug_types = shuffled_assignment(&BugType::ALL, &quota(&BUG_TYPE_SHARES, total), &mut master);
    let buckets = shuffled_assignment(&LocationBucket::ALL, &quota(&BUCKET_SHARES, total), &mut master);
    let domains = counts
        .iter()
        .flat_map(|&(d, c)| std::iter::repeat_n(d, c));
    let out: Result<Vec<_>> = domains
        .enumerate()
        .map(|(i, d)| generate_one(d, seed, i, bug_types[i], buckets[i]))
        .collect();
    log::info!("generated {total} scenarios with seed {seed}");
    out
}

/// Held-out scenarios for weight learning, drawn under their own seed.
pub fn generate_validation(split_seed: u64) -> Result<Vec<GeneratedScenario>> {
    let counts: Vec<(Domain, usize)> = Domain::ALL.iter().map(|&d| (d, VALIDATION_PER_DOMAIN)).collect();
    generate_benchmark(split_seed, &counts)
}

pub fn default_benchmark() -> Result<Vec<GeneratedScenario>> {
    generate_benchmark(DEFAULT_SEED, &DEFAULT_COUNTS)
}

fn scenario_id(domain: Domain, seed: u64, index: usize) -> String {
    let digest = Sha256::digest(format!("{seed}:{index}").as_bytes());
    format!("{}_{}", domain.id_prefix(), &hex::encode(digest)[..6])
}

fn sample_len<R: Rng>(rng: &mut R) -> usize {
    let total: u32 = LENGTH_WEIGHTS.iter().sum();
    let mut x = rng.gen_range(0..total);
    for (i, &w) in LENGTH_WEIGHTS.iter().enumerate() {
        if x < w {
            return MIN_LEN + i;
        }
        x -= w;
    }
    unreachable!("weights cover the draw")
}

fn verb(action: crate::trace::ActionType) -> &'static str {
    use crate::trace::ActionType::*;
    match action {
        Plan => "Drafted",
        Code => "Implemented",
        Review => "Reviewed",
        Execute => "Ran",
        Message => "Relayed",
        Search => "Collected sources for",
        Analyze => "Analyzed",
        Synthesize => "Synthesized",
        Write => "Wrote",
        Validate => "Validated",
        Other => "Recorded",
    }
}

fn slug(s: &str) -> String {
    s.replace(' ', "_")
}

struct Rendered {
    trace: ExecutionTrace,
    slots: Vec<StepSlots>,
    subject: &'static str,
}

fn render_clean<R: Rng>(t: &DomainTemplate, id: String, len: usize, rng: &mut R) -> Rendered {
    let plan = t.plan(len, rng);
    let subject = *t.subjects.choose(rng).expect("subjects");
    let artifact_id = |i: StepId| format!("{}_{i}", slug(t.artifact));
    let mut steps = Vec::with_capacity(len);
    let mut slots = Vec::with_capacity(len);
    for (idx, p) in plan.iter().enumerate() {
        let i = idx + 1;
        let mut vars = t.variables.choose_multiple(rng, 2);
        let rule_var = vars.next().expect("two variables").to_string();
        let handoff_var = vars.next().expect("two variables").to_string();
        let op = [">", ">=", "<", "<="].choose(rng).expect("ops").to_string();
        let limit = rng.gen_range(2..500).to_string();
        let check = t.checks.choose(rng).expect("checks").to_string();
        let next_role = plan[idx + 1..]
            .iter()
            .find(|q| q.role != p.role)
            .map(|q| t.roles[q.role].to_string());
        let s = StepSlots {
            artifact: t.artifact.to_string(),
            rule_var,
            op,
            limit,
            check,
            handoff_var,
            next_role,
        };

        let mut consumes = Vec::new();
        if i > 1 && plan[idx - 1].role != p.role && rng.gen_bool(HANDOFF_CONSUME_P) {
            consumes.push(artifact_id(i - 1));
        }
        let last = i == len;
        if last && rng.gen_bool(RECALL_P) {
            consumes.push(artifact_id(1));
        }
        let output = if last {
            format!(
                "{} the {} for {}. Outcome matches the plan; all checks passed.",
                verb(p.action),
                t.artifact,
                subject
            )
        } else {
            format!(
                "{} the {} for {}. Rule: {}.{}{}",
                verb(p.action),
                t.artifact,
                subject,
                s.rule(),
                s.verified(),
                s.handoff().unwrap_or_default()
            )
        };
        let input = if i == 1 {
            format!("Task: {subject}.")
        } else if consumes.is_empty() {
            format!("Continue work on {subject}.")
        } else {
            format!("Using {} for {subject}.", consumes.join(", "))
        };
        let confidence = (rng.gen_range(0.72..0.97f64) * 100.0).round() / 100.0;
        steps.push(Step {
            step_id: i,
            agent: t.roles[p.role].to_string(),
            action_type: p.action,
            input,
            output,
            timestamp: format!("2025-01-15T09:{:02}:{:02}Z", (i * 37) / 60, (i * 37) % 60),
            confidence: Some(confidence),
            produces: Some(vec![artifact_id(i)]),
            consumes: Some(consumes),
        });
        slots.push(s);
    }
    Rendered {
        trace: ExecutionTrace {
            scenario_id: id,
            domain: t.domain,
            agents: t.roles.iter().map(|r| r.to_string()).collect(),
            steps,
        },
        slots,
        subject,
    }
}

fn pick_step<R: Rng>(bucket: LocationBucket, len: usize, rng: &mut R) -> Option<StepId> {
    let range = bucket.range(len);
    if range.is_empty() {
        return None;
    }
    // The bug may not sit on the error node (the last step).
    (0..MAX_RESAMPLES)
        .map(|_| rng.gen_range(range.clone()))
        .find(|&s| s < len)
}

fn generate_one(
    domain: Domain,
    seed: u64,
    index: usize,
    bug_type: BugType,
    bucket: LocationBucket,
) -> Result<GeneratedScenario> {
    let t = DomainTemplate::for_domain(domain);
    let scenario_seed = seed ^ index as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(scenario_seed);
    let id = scenario_id(domain, seed, index);
    let len = sample_len(&mut rng);
    let Rendered { trace: clean, slots, subject } = render_clean(t, id, len, &mut rng);

    let root = pick_step(bucket, len, &mut rng).ok_or_else(|| Error::TemplateExhausted {
        template: t.pattern.as_str().to_string(),
        bucket: bucket.as_str().to_string(),
        attempts: MAX_RESAMPLES,
    })?;
    let kind = MutationKind::for_bug(bug_type);
    let root_step = clean.step(root);
    let root_slots = &slots[root - 1];
    let others: Vec<&str> = t
        .roles
        .iter()
        .copied()
        .filter(|r| *r != root_step.agent && Some(*r) != root_slots.next_role.as_deref())
        .collect();
    let other_role = *others.choose(&mut rng).expect("roster has at least three roles");
    let mutation = build_mutation(kind, root_slots, &root_step.output, other_role);

    let mut injected = clean.clone();
    injected.steps[root - 1].output = mutation
        .apply(&root_step.output)
        .expect("mutation targets text rendered from the same slots");
    let graph = CausalGraph::build(&injected);
    let error = len;
    for d in graph.descendants(root) {
        if d != error {
            injected.steps[d - 1].output.push_str(&cascade_note(&mutation.carried));
        }
    }
    let last = injected.step(error);
    injected.steps[error - 1].output = format!(
        "{} the {} for {}. Run failed: {} produced an incorrect result.",
        verb(last.action_type),
        t.artifact,
        subject,
        mutation.carried
    );

    let ground_truth = GroundTruth {
        error_node_id: error,
        root_cause_node_id: root,
        bug_type,
        bug_description: format!("{} at step {root}", mutation.description),
    };
    Ok(GeneratedScenario {
        scenario: Scenario::new(injected, ground_truth)?,
        clean,
        bug: BugSpec {
            bug_type,
            bucket,
            step: root,
            mutation: kind,
            seed: scenario_seed,
        },
        mutation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Share {
    pub count: usize,
    pub proportion: f64,
}

fn shares<K: Ord + Clone>(keys: impl Iterator<Item = K>, total: usize) -> BTreeMap<K, Share> {
    let mut m: BTreeMap<K, usize> = BTreeMap::new();
    for k in keys {
        *m.entry(k).or_default() += 1;
    }
    m.into_iter()
        .map(|(k, c)| {
            (
                k,
                Share {
                    count: c,
                    proportion: c as f64 / total as f64,
                },
            )
        })
        .collect()
}

/// Summary statistics written next to a generated benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub generator_version: String,
    pub seed: u64,
    pub scenario_count: usize,
    pub domains: BTreeMap<String, usize>,
    pub bug_types: BTreeMap<String, Share>,
    pub location_buckets: BTreeMap<String, Share>,
    pub trace_lengths: BTreeMap<usize, usize>,
    pub mean_nodes: f64,
    pub mean_edges: f64,
    pub edge_kinds: BTreeMap<String, Share>,
}

impl Manifest {
    pub fn from_scenarios(seed: u64, scenarios: &[GeneratedScenario]) -> Result<Self> {
        let n = scenarios.len();
        if n == 0 {
            return Err(Error::EmptyBenchmark);
        }
        let mut domains = BTreeMap::new();
        let mut lengths = BTreeMap::new();
        let mut kinds: Vec<EdgeKind> = Vec::new();
        let mut nodes = 0usize;
        for g in scenarios {
            *domains.entry(g.scenario.trace.domain.as_str().to_string()).or_default() += 1;
            *lengths.entry(g.scenario.trace.len()).or_default() += 1;
            let graph = CausalGraph::build(&g.scenario.trace);
            nodes += graph.node_count();
            kinds.extend(graph.edges().iter().map(|e| e.kind));
        }
        let edge_total = kinds.len();
        Ok(Manifest {
            generator_version: GENERATOR_VERSION.to_string(),
            seed,
            scenario_count: n,
            domains,
            bug_types: shares(scenarios.iter().map(|g| g.bug.bug_type.as_str().to_string()), n),
            location_buckets: shares(scenarios.iter().map(|g| g.bug.bucket.as_str().to_string()), n),
            trace_lengths: lengths,
            mean_nodes: nodes as f64 / n as f64,
            mean_edges: edge_total as f64 / n as f64,
            edge_kinds: shares(
                kinds.iter().map(|k| format!("{k:?}").to_lowercase()),
                edge_total.max(1),
            ),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quota_examples() {
        assert_eq!(quota(&BUG_TYPE_SHARES, 550), vec![165, 110, 110, 88, 77]);
        assert_eq!(quota(&BUCKET_SHARES, 550), vec![330, 165, 55]);
        assert_eq!(quota(&BUG_TYPE_SHARES, 50), vec![15, 10, 10, 8, 7]);
        assert_eq!(quota(&[0.5, 0.5], 3).iter().sum::<usize>(), 3);
    }

    #[test]
    fn bucket_ranges() {
        assert_eq!(LocationBucket::Early.range(8), 2..=3);
        assert_eq!(LocationBucket::Late.range(8), 7..=8);
        assert_eq!(LocationBucket::of_step(1), None);
        assert_eq!(LocationBucket::of_step(6), Some(LocationBucket::Middle));
        assert_eq!(LocationBucket::of_step(12), Some(LocationBucket::Late));
    }

    #[test]
    fn small_benchmark_is_deterministic_and_valid() {
        let counts = [(Domain::Coding, 6), (Domain::Devops, 6)];
        let a = generate_benchmark(7, &counts).unwrap();
        let b = generate_benchmark(7, &counts).unwrap();
        assert_eq!(a, b);
        for g in &a {
            let gt = &g.scenario.ground_truth;
            assert!(gt.root_cause_node_id < gt.error_node_id);
            assert_eq!(LocationBucket::of_step(gt.root_cause_node_id), Some(g.bug.bucket));
            assert!((8..=15).contains(&g.scenario.trace.len()));
            verify_ground_truth(g).unwrap();
        }
    }

    #[test]
    fn manifest_counts() {
        let counts = [(Domain::Legal, 10)];
        let s = generate_benchmark(3, &counts).unwrap();
        let m = Manifest::from_scenarios(3, &s).unwrap();
        assert_eq!(m.scenario_count, 10);
        assert_eq!(m.domains["legal"], 10);
        assert_eq!(m.bug_types.values().map(|s| s.count).sum::<usize>(), 10);
        assert_eq!(Manifest::from_scenarios(3, &[]), Err(Error::EmptyBenchmark));
    }
}
