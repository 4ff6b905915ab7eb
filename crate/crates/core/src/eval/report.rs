use std::fmt::Write;

use super::{Evaluation, StratumMetrics};

fn pct(x: f64) -> String {
    format!("{:.1}%", x * 100.0)
}

fn strata(out: &mut String, title: &str, table: &std::collections::BTreeMap<String, StratumMetrics>) {
    let _ = writeln!(out, "\n### {title}\n\n| Stratum | N | Hit@1 | Hit@3 | Hit@5 | MRR |\n|---|---|---|---|---|---|");
    for (k, v) in table {
        let _ = writeln!(
            out,
            "| {k} | {} | {} | {} | {} | {:.3} |",
            v.n,
            pct(v.hit_at_1),
            pct(v.hit_at_3),
            pct(v.hit_at_5),
            v.mrr
        );
    }
}

/// Markdown rendering of the metric and significance tables.
pub fn render_report(e: &Evaluation) -> String {
    let m = &e.metrics;
    let mut s = format!("# Evaluation report\n\nScenarios: {}\n\n## Accuracy\n\n", m.scenario_count);
    s.push_str("| Method | Hit@1 | 95% CI | Hit@3 | Hit@5 | MRR |\n|---|---|---|---|---|---|\n");
    for (meth, r) in &m.methods {
        let _ = writeln!(
            s,
            "| {meth} | {} | [{}, {}] | {} | {} | {:.3} |",
            pct(r.hit_at_1),
            pct(r.hit_at_1_ci.0),
            pct(r.hit_at_1_ci.1),
            pct(r.hit_at_3),
            pct(r.hit_at_5),
            r.mrr
        );
    }
    s.push_str("\n## Significance (McNemar, Hit@1)\n\n| Pair | n01 | n10 | chi2 | p | Cohen's h |\n|---|---|---|---|---|---|\n");
    for p in &e.significance.pairs {
        let _ = writeln!(
            s,
            "| {} vs {} | {} | {} | {} | {} | {:.3} ({}) |",
            p.first,
            p.second,
            p.n01,
            p.n10,
            p.chi_square.map_or_else(|| "n/a".into(), |c| format!("{c:.2}")),
            p.p_value_text,
            p.cohens_h,
            p.effect
        );
    }
    let h = &e.significance.cohens_h_check;
    let _ = writeln!(
        s,
        "\nCohen's h for proportions {} and {} evaluates to {:.4}; the commonly quoted {:.2} differs by {:.4}.",
        h.p1, h.p2, h.computed, h.reported, h.difference
    );
    s.push_str("\n## Ablation\n\n| Groups | Hit@1 | Delta |\n|---|---|---|\n");
    for r in &m.ablations {
        let _ = writeln!(s, "| {} | {} | {:+.1} |", r.groups, pct(r.hit_at_1), r.delta * 100.0);
    }
    s.push_str("\n## Position weight sensitivity\n\n| w_p | Hit@1 |\n|---|---|\n");
    for r in &m.sensitivity {
        let _ = writeln!(s, "| {:.2} | {} |", r.position_weight, pct(r.hit_at_1));
    }
    s.push_str("\n## Stratified results (agenttrace)\n");
    for (dim, title) in [
        ("bug_type", "Bug type"),
        ("trace_length", "Trace length"),
        ("bug_position", "Bug position"),
        ("domain", "Domain"),
    ] {
        if let Some(t) = m.stratified.get(dim) {
            strata(&mut s, title, t);
        }
    }
    if let Some(l) = &m.llm {
        let _ = writeln!(s, "\n## LLM baseline\n\nUnparseable completions: {}\n\n| Miss | Count |\n|---|---|", l.unparseable);
        for (k, v) in &l.misses {
            let _ = writeln!(s, "| {k:?} | {v} |");
        }
    }
    s
}
