//! The 17 per-node features, their min-max normalization over the candidate
//! set, and the five group scores.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CandidateSet, CausalGraph};
use crate::trace::{ActionType, ExecutionTrace, StepId};

/// Guard term in the min-max denominator.
pub const NORMALIZATION_EPSILON: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    Position,
    Structure,
    Content,
    Flow,
    Confidence,
}

impl Group {
    pub const ALL: [Group; 5] = [
        Group::Position,
        Group::Structure,
        Group::Content,
        Group::Flow,
        Group::Confidence,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Group::Position => "position",
            Group::Structure => "structure",
            Group::Content => "content",
            Group::Flow => "flow",
            Group::Confidence => "confidence",
        }
    }

    pub fn short(self) -> char {
        match self {
            Group::Position => 'P',
            Group::Structure => 'S',
            Group::Content => 'C',
            Group::Flow => 'F',
            Group::Confidence => 'E',
        }
    }

    pub fn features(self) -> impl Iterator<Item = Feature> {
        Feature::ALL.into_iter().filter(move |f| f.group() == self)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    NormalizedPosition,
    DistanceToError,
    DepthRatio,
    ReversePosition,
    OutDegree,
    InDegree,
    Betweenness,
    Reachability,
    ErrorKeywords,
    Uncertainty,
    LengthAnomaly,
    KeywordDensity,
    AgentSwitch,
    RoleCriticality,
    Communication,
    StatedConfidence,
    HedgingScore,
}

impl Feature {
    pub const COUNT: usize = 17;

    pub const ALL: [Feature; Feature::COUNT] = [
        Feature::NormalizedPosition,
        Feature::DistanceToError,
        Feature::DepthRatio,
        Feature::ReversePosition,
        Feature::OutDegree,
        Feature::InDegree,
        Feature::Betweenness,
        Feature::Reachability,
        Feature::ErrorKeywords,
        Feature::Uncertainty,
        Feature::LengthAnomaly,
        Feature::KeywordDensity,
        Feature::AgentSwitch,
        Feature::RoleCriticality,
        Feature::Communication,
        Feature::StatedConfidence,
        Feature::HedgingScore,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn group(self) -> Group {
        use Feature::*;
        match self {
            NormalizedPosition | DistanceToError | DepthRatio | ReversePosition => Group::Position,
            OutDegree | InDegree | Betweenness | Reachability => Group::Structure,
            ErrorKeywords | Uncertainty | LengthAnomaly | KeywordDensity => Group::Content,
            AgentSwitch | RoleCriticality | Communication => Group::Flow,
            StatedConfidence | HedgingScore => Group::Confidence,
        }
    }

    pub fn as_str(self) -> &'static str {
        use Feature::*;
        match self {
            NormalizedPosition => "normalized_position",
            DistanceToError => "distance_to_error",
            DepthRatio => "depth_ratio",
            ReversePosition => "reverse_position",
            OutDegree => "out_degree",
            InDegree => "in_degree",
            Betweenness => "betweenness",
            Reachability => "reachability",
            ErrorKeywords => "error_keywords",
            Uncertainty => "uncertainty",
            LengthAnomaly => "length_anomaly",
            KeywordDensity => "keyword_density",
            AgentSwitch => "agent_switch",
            RoleCriticality => "role_criticality",
            Communication => "communication",
            StatedConfidence => "stated_confidence",
            HedgingScore => "hedging_score",
        }
    }
}

/// Direction in which a normalized feature counts as suspicious.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Higher value is more suspicious; used as-is.
    Positive,
    /// Lower value is more suspicious; used as `1 - value`.
    Negative,
}

impl Orientation {
    pub fn apply(self, value: f64) -> f64 {
        match self {
            Orientation::Positive => value,
            Orientation::Negative => 1.0 - value,
        }
    }
}

impl Serialize for Orientation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        })
    }
}

impl<'de> Deserialize<'de> for Orientation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match i64::deserialize(d)? {
            1 => Ok(Orientation::Positive),
            -1 => Ok(Orientation::Negative),
            other => Err(serde::de::Error::custom(format!(
                "orientation must be 1 or -1, got {other}"
            ))),
        }
    }
}

fn words(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Keyword lists, role weights, and per-feature orientation.
///
/// Every field may be omitted in a config file; missing fields take the
/// defaults below. Role names match agent names case-insensitively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureConfig {
    pub error_keywords: Vec<String>,
    pub uncertainty_keywords: Vec<String>,
    pub hedge_words: Vec<String>,
    pub role_weights: BTreeMap<String, f64>,
    pub default_role_weight: f64,
    pub orientation: BTreeMap<Feature, Orientation>,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        use Feature::*;
        use Orientation::*;
        let orientation = BTreeMap::from([
            (NormalizedPosition, Negative),
            (DistanceToError, Positive),
            (DepthRatio, Negative),
            (ReversePosition, Positive),
            (OutDegree, Positive),
            (InDegree, Positive),
            (Betweenness, Positive),
            (Reachability, Positive),
            (ErrorKeywords, Positive),
            (Uncertainty, Positive),
            (LengthAnomaly, Positive),
            (KeywordDensity, Positive),
            (AgentSwitch, Positive),
            (RoleCriticality, Positive),
            (Communication, Positive),
            // Low stated confidence is the suspicious direction.
            (StatedConfidence, Negative),
            (HedgingScore, Positive),
        ]);
        FeatureConfig {
            error_keywords: words(&["error", "bug", "fail", "failed", "exception", "incorrect", "wrong"]),
            uncertainty_keywords: words(&["maybe", "perhaps", "possibly", "unsure"]),
            hedge_words: words(&[
                "might", "could", "seems", "appears", "likely", "maybe", "perhaps", "possibly",
                "somewhat", "roughly",
            ]),
            role_weights: default_role_weights(),
            default_role_weight: 0.5,
            orientation,
        }
    }
}

fn default_role_weights() -> BTreeMap<String, f64> {
    let table: &[(&str, f64)] = &[
        // coordinator / planner-like
        ("planner", 1.0),
        ("coordinator", 1.0),
        ("router", 1.0),
        ("scheduler", 1.0),
        ("strategist", 1.0),
        ("triager", 1.0),
        ("assessor", 1.0),
        ("monitor", 1.0),
        // analysts and specialists
        ("analyst", 0.7),
        ("analyzer", 0.7),
        ("specialist", 0.7),
        ("coder", 0.7),
        ("searcher", 0.7),
        ("synthesizer", 0.7),
        ("optimizer", 0.7),
        ("pharmacist", 0.7),
        ("researcher", 0.7),
        ("drafter", 0.7),
        ("tutor", 0.7),
        ("contentgenerator", 0.7),
        ("datacollector", 0.7),
        ("advisor", 0.7),
        ("diagnoser", 0.7),
        ("riskmanager", 0.7),
        ("resolver", 0.7),
        // reviewers and validators
        ("reviewer", 0.5),
        ("validator", 0.5),
        ("evaluator", 0.5),
        ("verifier", 0.5),
        // executors and reporters
        ("executor", 0.3),
        ("reporter", 0.3),
        ("writer", 0.3),
        ("logger", 0.3),
        ("notifier", 0.3),
        ("remediator", 0.3),
    ];
    table.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

impl FeatureConfig {
    /// Every feature oriented `+1`: Table-1 formulas taken at face value.
    pub fn literal() -> Self {
        FeatureConfig {
            orientation: Feature::ALL.iter().map(|&f| (f, Orientation::Positive)).collect(),
            ..FeatureConfig::default()
        }
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let mut cfg: FeatureConfig = serde_json::from_slice(bytes)
            .map_err(|e| Error::schema("feature_config", e.to_string()))?;
        // Orientation entries in a file are overrides on top of the defaults.
        for (f, o) in FeatureConfig::default().orientation {
            cfg.orientation.entry(f).or_insert(o);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (role, &w) in &self.role_weights {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::invariant(
                    format!("role_weights.{role}"),
                    format!("{w} is outside [0, 1]"),
                ));
            }
        }
        if !(0.0..=1.0).contains(&self.default_role_weight) {
            return Err(Error::invariant("default_role_weight", "outside [0, 1]"));
        }
        for f in Feature::ALL {
            if !self.orientation.contains_key(&f) {
                return Err(Error::invariant(
                    format!("orientation.{}", f.as_str()),
                    "orientation must be defined for every feature",
                ));
            }
        }
        Ok(())
    }

    pub fn orientation_of(&self, f: Feature) -> Orientation {
        self.orientation.get(&f).copied().unwrap_or(Orientation::Positive)
    }

    pub fn role_weight(&self, agent: &str) -> f64 {
        self.role_weights
            .get(&agent.to_ascii_lowercase())
            .copied()
            .unwrap_or(self.default_role_weight)
    }

    /// Short hex digest identifying this configuration in reports.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let bytes = crate::trace::to_canonical_json(self);
        hex::encode(&Sha256::digest(&bytes)[..8])
    }
}

/// One value per feature, indexed by [`Feature::index`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureValues(pub [f64; Feature::COUNT]);

impl FeatureValues {
    pub fn get(&self, f: Feature) -> f64 {
        self.0[f.index()]
    }

    pub fn set(&mut self, f: Feature, v: f64) {
        self.0[f.index()] = v;
    }

    pub fn to_map(&self) -> BTreeMap<&'static str, f64> {
        Feature::ALL.iter().map(|&f| (f.as_str(), self.get(f))).collect()
    }
}

impl Default for FeatureValues {
    fn default() -> Self {
        FeatureValues([0.0; Feature::COUNT])
    }
}

/// One value per group, indexed by [`Group::index`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GroupScores(pub [f64; 5]);

impl GroupScores {
    pub fn get(&self, g: Group) -> f64 {
        self.0[g.index()]
    }

    pub fn to_map(&self) -> BTreeMap<&'static str, f64> {
        Group::ALL.iter().map(|&g| (g.as_str(), self.get(g))).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub raw: FeatureValues,
    pub normalized: FeatureValues,
    pub group_scores: GroupScores,
}

/// Lowercased alphanumeric words, for whole-word keyword matching.
pub(crate) fn word_list(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric() && c != '\'')
        .filter(|w| !w.is_empty())
        .map(|w| w.to_lowercase())
        .collect()
}

fn count_matches(words: &[String], list: &[String]) -> usize {
    words
        .iter()
        .filter(|w| list.iter().any(|k| k.eq_ignore_ascii_case(w)))
        .count()
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Raw feature values for every candidate, keyed by step id.
pub fn extract_raw(
    trace: &ExecutionTrace,
    graph: &CausalGraph,
    candidates: &CandidateSet,
    config: &FeatureConfig,
) -> BTreeMap<StepId, FeatureValues> {
    let n = graph.node_count();
    let n_f = n as f64;

    let dist_to_error = graph.distances_to(candidates.error);
    let dist = |v: StepId| dist_to_error[v - 1].map(|d| d as f64).unwrap_or(n_f);
    let max_dist = candidates.members().map(dist).fold(0.0, f64::max);

    let depths = graph.depths();
    let max_depth = depths.iter().copied().max().unwrap_or(0) as f64;

    let max_out = graph.nodes().map(|v| graph.out_degree(v)).max().unwrap_or(0) as f64;
    let max_in = graph.nodes().map(|v| graph.in_degree(v)).max().unwrap_or(0) as f64;

    let btw = graph.betweenness();
    let btw_min = btw.iter().copied().fold(f64::INFINITY, f64::min);
    let btw_max = btw.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let lengths: Vec<f64> = trace.steps.iter().map(|s| s.output.chars().count() as f64).collect();
    let mean = lengths.iter().sum::<f64>() / lengths.len() as f64;
    let sd = (lengths.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / lengths.len() as f64).sqrt();

    let mut all_keywords = config.error_keywords.clone();
    for k in &config.uncertainty_keywords {
        if !all_keywords.iter().any(|e| e.eq_ignore_ascii_case(k)) {
            all_keywords.push(k.clone());
        }
    }

    let mut out = BTreeMap::new();
    for v in candidates.members() {
        let step = trace.step(v);
        let pos = v as f64 / n_f;
        let words = word_list(&step.output);
        let mut f = FeatureValues::default();

        f.set(Feature::NormalizedPosition, pos);
        f.set(Feature::DistanceToError, ratio(dist(v), max_dist));
        f.set(Feature::DepthRatio, ratio(depths[v - 1] as f64, max_depth));
        f.set(Feature::ReversePosition, 1.0 - pos);

        f.set(Feature::OutDegree, ratio(graph.out_degree(v) as f64, max_out));
        f.set(Feature::InDegree, ratio(graph.in_degree(v) as f64, max_in));
        f.set(Feature::Betweenness, ratio(btw[v - 1] - btw_min, btw_max - btw_min));
        f.set(Feature::Reachability, graph.descendants(v).len() as f64 / n_f);

        let has = |list: &[String]| (count_matches(&words, list) > 0) as u8 as f64;
        f.set(Feature::ErrorKeywords, has(&config.error_keywords));
        f.set(Feature::Uncertainty, has(&config.uncertainty_keywords));
        let anomaly = if sd > 0.0 {
            ((lengths[v - 1] - mean).abs() / (3.0 * sd)).min(1.0)
        } else {
            0.0
        };
        f.set(Feature::LengthAnomaly, anomaly);
        f.set(
            Feature::KeywordDensity,
            ratio(count_matches(&words, &all_keywords) as f64, words.len() as f64).min(1.0),
        );

        let switched = v > 1 && trace.step(v - 1).agent != step.agent;
        f.set(Feature::AgentSwitch, switched as u8 as f64);
        f.set(Feature::RoleCriticality, config.role_weight(&step.agent));
        f.set(
            Feature::Communication,
            (step.action_type == ActionType::Message) as u8 as f64,
        );

        f.set(Feature::StatedConfidence, step.confidence.unwrap_or(0.5));
        f.set(
            Feature::HedgingScore,
            (count_matches(&words, &config.hedge_words) as f64 / 10.0).min(1.0),
        );

        out.insert(v, f);
    }
    out
}

/// Min-max normalization with the epsilon-guarded denominator.
pub fn normalize(values: &[f64]) -> Vec<f64> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values
        .iter()
        .map(|v| (v - min) / (max - min + NORMALIZATION_EPSILON))
        .collect()
}

/// Normalizes each feature column over the given population.
pub fn normalize_all(raw: &BTreeMap<StepId, FeatureValues>) -> BTreeMap<StepId, FeatureValues> {
    let mut out: BTreeMap<StepId, FeatureValues> =
        raw.keys().map(|&k| (k, FeatureValues::default())).collect();
    for f in Feature::ALL {
        let column: Vec<f64> = raw.values().map(|fv| fv.get(f)).collect();
        for (v, value) in raw.keys().zip(normalize(&column)) {
            out.get_mut(v).unwrap().set(f, value);
        }
    }
    out
}

/// Orients each normalized feature and averages within its group.
pub fn group_scores(normalized: &FeatureValues, config: &FeatureConfig) -> GroupScores {
    let mut sums = [0.0; 5];
    let mut counts = [0usize; 5];
    for f in Feature::ALL {
        let g = f.group().index();
        sums[g] += config.orientation_of(f).apply(normalized.get(f));
        counts[g] += 1;
    }
    let mut out = GroupScores::default();
    for g in 0..5 {
        out.0[g] = sums[g] / counts[g] as f64;
    }
    out
}

/// Full feature pipeline for a candidate set.
pub fn feature_vectors(
    trace: &ExecutionTrace,
    graph: &CausalGraph,
    candidates: &CandidateSet,
    config: &FeatureConfig,
) -> BTreeMap<StepId, FeatureVector> {
    let raw = extract_raw(trace, graph, candidates, config);
    let normalized = normalize_all(&raw);
    raw.into_iter()
        .map(|(v, raw)| {
            let normalized = normalized[&v];
            let group_scores = group_scores(&normalized, config);
            (
                v,
                FeatureVector {
                    raw,
                    normalized,
                    group_scores,
                },
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, EdgeKind};
    use crate::trace::{Domain, Step};

    fn trace(outputs: &[&str]) -> ExecutionTrace {
        let agents = ["Planner", "Coder", "Reviewer", "Executor", "Coder"];
        ExecutionTrace {
            scenario_id: "t".into(),
            domain: Domain::Coding,
            agents: vec!["Planner".into(), "Coder".into(), "Reviewer".into(), "Executor".into()],
            steps: outputs
                .iter()
                .enumerate()
                .map(|(i, o)| Step {
                    step_id: i + 1,
                    agent: agents[i % agents.len()].into(),
                    action_type: ActionType::Other,
                    input: String::new(),
                    output: o.to_string(),
                    timestamp: String::new(),
                    confidence: None,
                    produces: Some(vec![]),
                    consumes: Some(vec![]),
                })
                .collect(),
        }
    }

    fn chain(n: usize) -> CausalGraph {
        CausalGraph::from_edges(
            n,
            (1..n).map(|i| Edge {
                from: i,
                to: i + 1,
                kind: EdgeKind::Sequential,
            }),
        )
    }

    #[test]
    fn chain_positions_and_reachability() {
        let t = trace(&["a", "b", "c", "d", "e"]);
        let g = chain(5);
        let c = g.backtrace(5, 10).unwrap();
        let raw = extract_raw(&t, &g, &c, &FeatureConfig::default());
        let f1 = raw[&1];
        assert!((f1.get(Feature::NormalizedPosition) - 0.2).abs() < 1e-12);
        assert!((f1.get(Feature::ReversePosition) - 0.8).abs() < 1e-12);
        assert!((f1.get(Feature::Reachability) - 0.8).abs() < 1e-12);
        assert_eq!(f1.get(Feature::DistanceToError), 1.0);
        assert_eq!(f1.get(Feature::AgentSwitch), 0.0);
        assert_eq!(raw[&2].get(Feature::AgentSwitch), 1.0);
        assert_eq!(f1.get(Feature::StatedConfidence), 0.5);
        assert_eq!(f1.get(Feature::RoleCriticality), 1.0);
        assert_eq!(raw[&4].get(Feature::RoleCriticality), 0.3);
    }

    #[test]
    fn error_keyword_whole_word() {
        let t = trace(&["an error occurred", "SyntaxError at line 2", "fine", "maybe", "x"]);
        let g = chain(5);
        let c = g.backtrace(5, 10).unwrap();
        let raw = extract_raw(&t, &g, &c, &FeatureConfig::default());
        assert_eq!(raw[&1].get(Feature::ErrorKeywords), 1.0);
        assert_eq!(raw[&2].get(Feature::ErrorKeywords), 0.0);
        assert_eq!(raw[&3].get(Feature::ErrorKeywords), 0.0);
        assert_eq!(raw[&4].get(Feature::Uncertainty), 1.0);
        assert_eq!(raw[&4].get(Feature::HedgingScore), 0.1);
        assert_eq!(raw[&4].get(Feature::KeywordDensity), 1.0);
        assert!((raw[&1].get(Feature::KeywordDensity) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn equal_lengths_have_no_anomaly() {
        let t = trace(&["aaaa", "bbbb", "cccc", "dddd", "eeee"]);
        let g = chain(5);
        let c = g.backtrace(5, 10).unwrap();
        let raw = extract_raw(&t, &g, &c, &FeatureConfig::default());
        assert!(raw.values().all(|f| f.get(Feature::LengthAnomaly) == 0.0));
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&[2.0, 4.0, 6.0]);
        for (got, want) in n.iter().zip([0.0, 0.5, 1.0]) {
            assert!((got - want).abs() < 1e-7);
        }
        assert_eq!(normalize(&[5.0, 5.0, 5.0]), vec![0.0, 0.0, 0.0]);
        // (3 - 3) / (3 - 3 + 1e-8) = 0
        assert_eq!(normalize(&[3.0]), vec![0.0]);
    }

    #[test]
    fn group_score_examples() {
        let cfg = FeatureConfig::literal();
        let g = group_scores(&FeatureValues([1.0; Feature::COUNT]), &cfg);
        assert!(g.0.iter().all(|&s| s == 1.0));

        let mut v = FeatureValues::default();
        v.set(Feature::OutDegree, 0.2);
        v.set(Feature::InDegree, 0.4);
        v.set(Feature::Betweenness, 0.6);
        v.set(Feature::Reachability, 0.8);
        assert!((group_scores(&v, &cfg).get(Group::Structure) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn position_group_prefers_earlier_chain_node() {
        // Hand computation on the 5-chain with default orientation: node 1 has
        // every oriented position feature at ~1, node 4 at ~0.25.
        let t = trace(&["a", "b", "c", "d", "e"]);
        let g = chain(5);
        let c = g.backtrace(5, 10).unwrap();
        let fv = feature_vectors(&t, &g, &c, &FeatureConfig::default());
        let p1 = fv[&1].group_scores.get(Group::Position);
        let p4 = fv[&4].group_scores.get(Group::Position);
        assert!((p1 - 1.0).abs() < 1e-6);
        assert!((p4 - 0.25).abs() < 1e-6);
        assert!(p1 > p4);
    }

    #[test]
    fn config_round_trip_and_validation() {
        let cfg = FeatureConfig::default();
        let bytes = crate::trace::to_canonical_json(&cfg);
        assert_eq!(FeatureConfig::from_json(&bytes).unwrap(), cfg);
        let partial = br#"{"error_keywords": ["boom"]}"#;
        let p = FeatureConfig::from_json(partial).unwrap();
        assert_eq!(p.error_keywords, vec!["boom".to_string()]);
        assert_eq!(p.orientation, cfg.orientation);
        let bad = br#"{"role_weights": {"planner": 1.5}}"#;
        assert!(FeatureConfig::from_json(bad).is_err());
        let bad = br#"{"orientation": {"depth_ratio": 2}}"#;
        assert!(FeatureConfig::from_json(bad).is_err());
        let over = FeatureConfig::from_json(br#"{"orientation": {"depth_ratio": 1}}"#).unwrap();
        assert_eq!(over.orientation_of(Feature::DepthRatio), Orientation::Positive);
        assert_eq!(over.orientation_of(Feature::NormalizedPosition), Orientation::Negative);
    }
}
