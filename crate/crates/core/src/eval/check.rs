//! Threshold checks applied by `evaluate --check`.

use serde::Serialize;

use super::{Evaluation, Method};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn line(name: &str, passed: bool, detail: String) -> CheckLine {
    CheckLine {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Accuracy, ordering, ablation, and robustness thresholds.
pub fn check_evaluation(e: &Evaluation) -> Vec<CheckLine> {
    let m = &e.metrics;
    let at = &m.methods[&Method::AgentTrace];
    let hit1 = |meth: Method| m.methods.get(&meth).map(|x| x.hit_at_1);
    let mut out = vec![line(
        "headline accuracy",
        at.hit_at_1 >= 0.88 && at.hit_at_3 >= 0.95 && at.mrr >= 0.93,
        format!(
            "Hit@1 {:.3} (>= 0.88), Hit@3 {:.3} (>= 0.95), MRR {:.3} (>= 0.93)",
            at.hit_at_1, at.hit_at_3, at.mrr
        ),
    )];
    out.push(line(
        "hit@5",
        at.hit_at_5 >= 0.99,
        format!("Hit@5 {:.3} (>= 0.99)", at.hit_at_5),
    ));

    let chain: Vec<Method> = [Method::AgentTrace, Method::Llm, Method::Last, Method::Random, Method::First]
        .into_iter()
        .filter(|x| m.methods.contains_key(x))
        .collect();
    let ordered = chain.windows(2).all(|w| hit1(w[0]) > hit1(w[1]));
    out.push(line(
        "baseline ordering",
        ordered,
        chain
            .iter()
            .map(|x| format!("{x} {:.3}", hit1(*x).unwrap_or(f64::NAN)))
            .collect::<Vec<_>>()
            .join(" > "),
    ));
    for p in &e.significance.pairs {
        if p.first == Method::AgentTrace && matches!(p.second, Method::Last | Method::Random | Method::First) {
            out.push(line(
                &format!("mcnemar agenttrace vs {}", p.second),
                p.p_value.is_some_and(|v| v < 1e-6),
                format!("p = {} (< 1e-6)", p.p_value_text),
            ));
        }
    }

    let ab = |g: &str| m.ablations.iter().find(|r| r.groups == g).map(|r| r.hit_at_1);
    let p_only = ab("P").unwrap_or(0.0);
    out.push(line("position-only", p_only >= 0.80, format!("P-only Hit@1 {p_only:.3} (>= 0.80)")));
    let singles_below = ["P", "S", "C", "F", "E"].iter().all(|g| ab(g) < Some(at.hit_at_1));
    out.push(line(
        "single-group ablations below full",
        singles_below,
        ["P", "S", "C", "F", "E"]
            .iter()
            .map(|g| format!("{g} {:.3}", ab(g).unwrap_or(f64::NAN)))
            .collect::<Vec<_>>()
            .join(", ")
            + &format!(" vs full {:.3}", at.hit_at_1),
    ));
    let ps = ab("P+S").unwrap_or(0.0);
    out.push(line("P+S >= P", ps >= p_only, format!("P+S {ps:.3} vs P {p_only:.3}")));
    let sweep = &m.sensitivity;
    let best = sweep
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.hit_at_1.total_cmp(&b.1.hit_at_1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i);
    let interior = best.is_some_and(|i| i > 0 && i + 1 < sweep.len() && (sweep[i].position_weight - 0.7).abs() <= 0.1 + 1e-9);
    out.push(line(
        "sensitivity peak",
        interior,
        sweep
            .iter()
            .map(|r| format!("{:.1}:{:.3}", r.position_weight, r.hit_at_1))
            .collect::<Vec<_>>()
            .join(" "),
    ));

    let bt = &m.stratified["bug_type"];
    let worst = bt.iter().map(|(k, v)| (k, v.hit_at_1)).min_by(|a, b| a.1.total_cmp(&b.1));
    out.push(line(
        "bug-type strata",
        bt.values().all(|v| v.hit_at_1 >= 0.85),
        worst.map_or_else(String::new, |(k, v)| format!("lowest {k} {v:.3} (>= 0.85)")),
    ));
    let pos = &m.stratified["bug_position"];
    let early = pos.get("early").map(|v| v.hit_at_1);
    let late = pos.get("late").map(|v| v.hit_at_1);
    out.push(line(
        "early >= late",
        matches!((early, late), (Some(a), Some(b)) if a >= b),
        format!("early {} vs late {}", fmt_opt(early), fmt_opt(late)),
    ));
    out
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.3}"))
}
