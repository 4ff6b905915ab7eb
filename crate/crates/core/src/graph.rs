//! Causal graph construction and the graph queries the ranker needs.
//!
//! Nodes are step ids `1..=n`. Every edge points forward in time
//! (`from < to`), which makes the graph acyclic by construction. Three edge
//! kinds are recognised:
//!
//! * **sequential**: consecutive actions of the same agent;
//! * **communication**: a hand-off to the immediately following step when the
//!   agent changes, plus a `message` step paired with its first consumer from
//!   another agent;
//! * **data**: producer to consumer, from the explicit `produces`/`consumes`
//!   lists or, when those are absent, from identifier tokens shared between
//!   the producer's output and the consumer's input.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::{ActionType, ExecutionTrace, StepId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Sequential,
    Communication,
    Data,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 3] = [EdgeKind::Sequential, EdgeKind::Communication, EdgeKind::Data];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: StepId,
    pub to: StepId,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CausalGraph {
    node_count: usize,
    edges: Vec<Edge>,
    // Indexed by step_id - 1; neighbour lists are deduplicated across kinds
    // and sorted ascending.
    children: Vec<Vec<StepId>>,
    parents: Vec<Vec<StepId>>,
}

/// Words ignored by the free-text data-dependency scan.
const STOP_WORDS: &[&str] = &[
    "the", "and", "for", "are", "but", "not", "you", "all", "any", "can", "had", "her", "was",
    "one", "our", "out", "has", "have", "his", "how", "its", "may", "new", "now", "old", "see",
    "two", "way", "who", "did", "get", "let", "say", "she", "too", "use", "with", "this", "that",
    "from", "they", "will", "would", "there", "their", "what", "about", "which", "when", "were",
    "been", "into", "than", "then", "them", "these", "those", "some", "such", "only", "also",
    "over", "very", "just", "each", "other", "after", "before", "should", "could", "because",
    "while", "where", "here", "does", "done", "being", "both", "same", "most", "more", "less",
    "per", "via", "upon", "onto", "your", "yours", "ours", "itself", "within", "without",
];

/// Identifier tokens of `text`: maximal runs of `[A-Za-z_][A-Za-z0-9_]*`
/// of length at least three, lowercased, stop words removed.
pub fn identifier_tokens(text: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let token = text[start..i].to_ascii_lowercase();
            if token.len() >= 3 && !STOP_WORDS.contains(&token.as_str()) {
                out.insert(token);
            }
        } else if c.is_ascii_digit() {
            // A digit cannot start an identifier; skip the whole alphanumeric run.
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    out
}

/// Whether step `consumer` reads something step `producer` wrote.
fn data_dependency(trace: &ExecutionTrace, producer: StepId, consumer: StepId) -> bool {
    let p = trace.step(producer);
    let c = trace.step(consumer);
    match (&p.produces, &c.consumes) {
        (Some(produced), Some(consumed)) => produced.iter().any(|v| consumed.contains(v)),
        _ => {
            let out = identifier_tokens(&p.output);
            if out.is_empty() {
                return false;
            }
            identifier_tokens(&c.input).iter().any(|t| out.contains(t))
        }
    }
}

impl CausalGraph {
    /// Builds a graph directly from an edge list. Edges with `from >= to` or
    /// an endpoint outside `1..=node_count` are dropped.
    pub fn from_edges(node_count: usize, edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for e in edges {
            if e.from == 0 || e.to > node_count || e.from >= e.to {
                log::warn!("dropping edge {}->{} ({:?}): violates from < to", e.from, e.to, e.kind);
                continue;
            }
            if seen.insert(e) {
                kept.push(e);
            }
        }
        kept.sort();
        let mut children = vec![Vec::new(); node_count];
        let mut parents = vec![Vec::new(); node_count];
        for e in &kept {
            children[e.from - 1].push(e.to);
            parents[e.to - 1].push(e.from);
        }
        for list in children.iter_mut().chain(parents.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        CausalGraph {
            node_count,
            edges: kept,
            children,
            parents,
        }
    }

    pub fn build(trace: &ExecutionTrace) -> Self {
        let n = trace.len();
        let mut edges = Vec::new();

        let mut last_by_agent: BTreeMap<&str, StepId> = BTreeMap::new();
        for step in &trace.steps {
            if let Some(&prev) = last_by_agent.get(step.agent.as_str()) {
                edges.push(Edge {
                    from: prev,
                    to: step.step_id,
                    kind: EdgeKind::Sequential,
                });
            }
            last_by_agent.insert(&step.agent, step.step_id);
        }

        for i in 1..n {
            if trace.step(i).agent != trace.step(i + 1).agent {
                edges.push(Edge {
                    from: i,
                    to: i + 1,
                    kind: EdgeKind::Communication,
                });
            }
        }

        for i in 1..=n {
            if trace.step(i).action_type != ActionType::Message {
                continue;
            }
            let sender = &trace.step(i).agent;
            if let Some(j) = (i + 1..=n)
                .find(|&j| &trace.step(j).agent != sender && data_dependency(trace, i, j))
            {
                edges.push(Edge {
                    from: i,
                    to: j,
                    kind: EdgeKind::Communication,
                });
            }
        }

        for i in 1..=n {
            for j in i + 1..=n {
                if data_dependency(trace, i, j) {
                    edges.push(Edge {
                        from: i,
                        to: j,
                        kind: EdgeKind::Data,
                    });
                }
            }
        }

        CausalGraph::from_edges(n, edges)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn nodes(&self) -> impl Iterator<Item = StepId> {
        1..=self.node_count
    }

    pub fn contains(&self, v: StepId) -> bool {
        v >= 1 && v <= self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn parents(&self, v: StepId) -> &[StepId] {
        &self.parents[v - 1]
    }

    pub fn children(&self, v: StepId) -> &[StepId] {
        &self.children[v - 1]
    }

    pub fn in_degree(&self, v: StepId) -> usize {
        self.parents(v).len()
    }

    pub fn out_degree(&self, v: StepId) -> usize {
        self.children(v).len()
    }

    pub fn edge_kind_counts(&self) -> BTreeMap<EdgeKind, usize> {
        let mut counts: BTreeMap<EdgeKind, usize> = EdgeKind::ALL.iter().map(|&k| (k, 0)).collect();
        for e in &self.edges {
            *counts.entry(e.kind).or_default() += 1;
        }
        counts
    }

    /// Kahn's algorithm; `None` if a cycle exists.
    pub fn topological_order(&self) -> Option<Vec<StepId>> {
        let mut indeg: Vec<usize> = self.nodes().map(|v| self.in_degree(v)).collect();
        let mut queue: VecDeque<StepId> = self.nodes().filter(|&v| indeg[v - 1] == 0).collect();
        let mut order = Vec::with_capacity(self.node_count);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in self.children(v) {
                indeg[c - 1] -= 1;
                if indeg[c - 1] == 0 {
                    queue.push_back(c);
                }
            }
        }
        (order.len() == self.node_count).then_some(order)
    }

    /// Depth-limited breadth-first walk over reverse edges from `error`.
    pub fn backtrace(&self, error: StepId, max_depth: usize) -> Result<CandidateSet> {
        if !self.contains(error) {
            return Err(Error::NodeNotFound(error));
        }
        let mut depth_of = BTreeMap::new();
        depth_of.insert(error, 0);
        let mut frontier = vec![error];
        for layer in 1..=max_depth {
            let mut next = Vec::new();
            for &v in &frontier {
                for &u in self.parents(v) {
                    if let std::collections::btree_map::Entry::Vacant(slot) = depth_of.entry(u) {
                        slot.insert(layer);
                        next.push(u);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(CandidateSet { error, depth_of })
    }

    pub fn descendants(&self, v: StepId) -> BTreeSet<StepId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for &c in self.children(x) {
                if seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        seen
    }

    pub fn ancestors(&self, v: StepId) -> BTreeSet<StepId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for &p in self.parents(x) {
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Directed shortest path length, `None` when `to` is unreachable.
    pub fn shortest_path_len(&self, from: StepId, to: StepId) -> Option<usize> {
        if from == to {
            return Some(0);
        }
        let mut dist = vec![usize::MAX; self.node_count];
        dist[from - 1] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &c in self.children(x) {
                if dist[c - 1] == usize::MAX {
                    dist[c - 1] = dist[x - 1] + 1;
                    if c == to {
                        return Some(dist[c - 1]);
                    }
                    queue.push_back(c);
                }
            }
        }
        None
    }

    /// Shortest directed distance from every node to `target`
    /// (one reverse BFS). Index `v - 1`.
    pub fn distances_to(&self, target: StepId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count];
        dist[target - 1] = Some(0);
        let mut queue = VecDeque::from([target]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x - 1].unwrap();
            for &p in self.parents(x) {
                if dist[p - 1].is_none() {
                    dist[p - 1] = Some(d + 1);
                    queue.push_back(p);
                }
            }
        }
        dist
    }

    /// Longest path from any source to each node. Index `v - 1`.
    pub fn depths(&self) -> Vec<usize> {
        // Step order is a topological order because every edge has from < to.
        let mut depth = vec![0usize; self.node_count];
        for v in self.nodes() {
            depth[v - 1] = self
                .parents(v)
                .iter()
                .map(|&p| depth[p - 1] + 1)
                .max()
                .unwrap_or(0);
        }
        depth
    }

    pub fn longest_path_depth(&self, v: StepId) -> usize {
        self.depths()[v - 1]
    }

    /// Unnormalized betweenness over ordered pairs (Brandes). Index `v - 1`.
    pub fn betweenness(&self) -> Vec<f64> {
        let n = self.node_count;
        let mut centrality = vec![0.0; n];
        let mut stack = Vec::with_capacity(n);
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![-1i64; n];
        let mut delta = vec![0.0f64; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            stack.clear();
            for p in preds.iter_mut() {
                p.clear();
            }
            sigma.fill(0.0);
            dist.fill(-1);
            sigma[s] = 1.0;
            dist[s] = 0;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                stack.push(v);
                for &c in &self.children[v] {
                    let w = c - 1;
                    if dist[w] < 0 {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                    if dist[w] == dist[v] + 1 {
                        sigma[w] += sigma[v];
                        preds[w].push(v);
                    }
                }
            }
            delta.fill(0.0);
            while let Some(w) = stack.pop() {
                for &v in &preds[w] {
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
                if w != s {
                    centrality[w] += delta[w];
                }
            }
        }
        centrality
    }

    pub fn to_dump(&self, trace: &ExecutionTrace) -> GraphDump {
        GraphDump {
            nodes: trace
                .steps
                .iter()
                .map(|s| DumpNode {
                    step_id: s.step_id,
                    agent: s.agent.clone(),
                    action_type: s.action_type,
                    in_degree: self.in_degree(s.step_id),
                    out_degree: self.out_degree(s.step_id),
                })
                .collect(),
            edges: self.edges.clone(),
        }
    }
}

/// Output of backward tracing: the candidate set with discovery layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    pub error: StepId,
    pub depth_of: BTreeMap<StepId, usize>,
}

impl CandidateSet {
    pub fn members(&self) -> impl Iterator<Item = StepId> + '_ {
        self.depth_of.keys().copied()
    }

    pub fn contains(&self, v: StepId) -> bool {
        self.depth_of.contains_key(&v)
    }

    pub fn len(&self) -> usize {
        self.depth_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depth_of.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpNode {
    pub step_id: StepId,
    pub agent: String,
    pub action_type: ActionType,
    pub in_degree: usize,
    pub out_degree: usize,
}

/// JSON shape of `--dump-graph`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDump {
    pub nodes: Vec<DumpNode>,
    pub edges: Vec<Edge>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{Domain, Step};

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

    fn diamond() -> CausalGraph {
        let e = |from, to| Edge {
            from,
            to,
            kind: EdgeKind::Data,
        };
        CausalGraph::from_edges(4, [e(1, 2), e(1, 3), e(2, 4), e(3, 4)])
    }

    fn step(id: StepId, agent: &str, action: ActionType, input: &str, output: &str) -> Step {
        Step {
            step_id: id,
            agent: agent.into(),
            action_type: action,
            input: input.into(),
            output: output.into(),
            timestamp: format!("2025-01-01T00:00:0{id}Z"),
            confidence: None,
            produces: None,
            consumes: None,
        }
    }

    fn example_one() -> ExecutionTrace {
        let steps = vec![
            step(1, "Planner", ActionType::Plan, "Analyze requirements", "Sum all numbers, count elements, divide"),
            step(2, "Coder", ActionType::Code, "Write implementation", "def average(nums): ..."),
            step(3, "Coder", ActionType::Code, "Add edge case handling", "if nums = []:"),
            step(4, "Reviewer", ActionType::Review, "Review code", "Code looks correct."),
            step(5, "Executor", ActionType::Execute, "Run tests", "SyntaxError: invalid syntax at line 2"),
        ];
        ExecutionTrace {
            scenario_id: "example1".into(),
            domain: Domain::Coding,
            agents: vec!["Planner".into(), "Coder".into(), "Reviewer".into(), "Executor".into()],
            steps,
        }
    }

    #[test]
    fn example_one_edges() {
        let g = CausalGraph::build(&example_one());
        let of = |kind| {
            g.edges()
                .iter()
                .filter(|e| e.kind == kind)
                .map(|e| (e.from, e.to))
                .collect::<Vec<_>>()
        };
        assert_eq!(of(EdgeKind::Sequential), vec![(2, 3)]);
        assert_eq!(of(EdgeKind::Communication), vec![(1, 2), (3, 4), (4, 5)]);
        assert!(of(EdgeKind::Data).is_empty());
    }

    #[test]
    fn single_step_has_no_edges() {
        let mut t = example_one();
        t.steps.truncate(1);
        let g = CausalGraph::build(&t);
        assert_eq!(g.node_count(), 1);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn explicit_data_lists() {
        let mut t = example_one();
        t.steps[1].produces = Some(vec!["impl".into()]);
        t.steps[4].consumes = Some(vec!["impl".into(), "tests".into()]);
        t.steps[0].produces = Some(vec![]);
        for s in &mut t.steps {
            s.produces.get_or_insert_with(Vec::new);
            s.consumes.get_or_insert_with(Vec::new);
        }
        let g = CausalGraph::build(&t);
        let data: Vec<_> = g.edges().iter().filter(|e| e.kind == EdgeKind::Data).collect();
        assert_eq!(data.len(), 1);
        assert_eq!((data[0].from, data[0].to), (2, 5));
    }

    #[test]
    fn text_fallback_links_shared_identifiers() {
        let mut t = example_one();
        t.steps[1].output = "def average(nums): return total_sum / count".into();
        t.steps[3].input = "Review average implementation".into();
        let g = CausalGraph::build(&t);
        assert!(g.edges().contains(&Edge {
            from: 2,
            to: 4,
            kind: EdgeKind::Data
        }));
    }

    #[test]
    fn message_pairs_with_first_foreign_consumer() {
        let mut t = example_one();
        for s in &mut t.steps {
            s.produces = Some(vec![]);
            s.consumes = Some(vec![]);
        }
        t.steps[0].action_type = ActionType::Message;
        t.steps[0].produces = Some(vec!["design".into()]);
        t.steps[3].consumes = Some(vec!["design".into()]);
        let g = CausalGraph::build(&t);
        assert!(g.edges().contains(&Edge {
            from: 1,
            to: 4,
            kind: EdgeKind::Communication
        }));
        assert!(g.edges().contains(&Edge {
            from: 1,
            to: 4,
            kind: EdgeKind::Data
        }));
    }

    #[test]
    fn tokens() {
        let t = identifier_tokens("if nums = []: total_sum2 += x; the 3rd AND");
        assert_eq!(
            t.into_iter().collect::<Vec<_>>(),
            vec!["nums".to_string(), "total_sum2".to_string()]
        );
    }

    #[test]
    fn backward_edges_are_dropped() {
        let g = CausalGraph::from_edges(
            3,
            [
                Edge { from: 2, to: 1, kind: EdgeKind::Data },
                Edge { from: 2, to: 2, kind: EdgeKind::Data },
                Edge { from: 1, to: 3, kind: EdgeKind::Data },
                Edge { from: 1, to: 3, kind: EdgeKind::Data },
                Edge { from: 1, to: 3, kind: EdgeKind::Sequential },
            ],
        );
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.children(1), &[3]);
    }

    #[test]
    fn backtrace_chain() {
        let g = chain(5);
        let c = g.backtrace(5, 10).unwrap();
        assert_eq!(c.members().collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
        assert_eq!(
            c.depth_of,
            BTreeMap::from([(5, 0), (4, 1), (3, 2), (2, 3), (1, 4)])
        );
        let c = g.backtrace(5, 2).unwrap();
        assert_eq!(c.members().collect::<Vec<_>>(), vec![3, 4, 5]);
    }

    #[test]
    fn backtrace_diamond_first_discovery_wins() {
        let c = diamond().backtrace(4, 10).unwrap();
        assert_eq!(c.members().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert_eq!(c.depth_of[&1], 2);
        assert_eq!(c.depth_of[&2], 1);
    }

    #[test]
    fn backtrace_unknown_node() {
        assert_eq!(chain(3).backtrace(4, 10), Err(Error::NodeNotFound(4)));
        assert_eq!(chain(3).backtrace(0, 10), Err(Error::NodeNotFound(0)));
    }

    #[test]
    fn queries_on_chain_and_diamond() {
        let g = chain(5);
        assert_eq!(g.descendants(2), BTreeSet::from([3, 4, 5]));
        assert_eq!(g.shortest_path_len(1, 5), Some(4));
        assert_eq!(g.shortest_path_len(5, 1), None);
        assert_eq!(g.distances_to(5), vec![Some(4), Some(3), Some(2), Some(1), Some(0)]);
        assert_eq!(diamond().longest_path_depth(4), 2);
        assert_eq!(diamond().shortest_path_len(1, 4), Some(2));
    }

    #[test]
    fn chain_betweenness_by_enumeration() {
        // On a directed 5-chain node k lies on the unique path s -> t for
        // every s < k < t, so its score is (k - 1) * (5 - k).
        let b = chain(5).betweenness();
        assert_eq!(b, vec![0.0, 3.0, 4.0, 3.0, 0.0]);
    }

    #[test]
    fn diamond_betweenness_splits_paths() {
        // 1 -> 4 has two shortest paths, one through each of 2 and 3.
        let b = diamond().betweenness();
        assert_eq!(b, vec![0.0, 0.5, 0.5, 0.0]);
    }
}
