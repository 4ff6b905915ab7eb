//! Latency of the analysis pipeline as a function of trace length.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;

use crate::benchgen::synthetic_trace;
use crate::error::{Error, Result};
use crate::ranker::{Analyzer, StageTimings};
use crate::stats::quantile_sorted;

pub const BENCH_SIZES: [usize; 5] = [5, 10, 15, 20, 25];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageStat {
    pub mean_ms: f64,
    pub std_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuntimeRow {
    pub steps: usize,
    pub runs: usize,
    pub mean_ms: f64,
    pub std_ms: f64,
    pub p95_ms: f64,
    pub stages: BTreeMap<&'static str, StageStat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuntimeReport {
    pub rows: Vec<RuntimeRow>,
    pub fit: LinearFit,
    /// Stage with the largest mean share across all sizes.
    pub dominant_stage: &'static str,
}

/// Ordinary least squares of `ys` on `xs`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument("a linear fit needs at least two paired points".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("x values are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

fn stat(xs: &[f64]) -> StageStat {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    StageStat {
        mean_ms: mean,
        std_ms: (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt(),
    }
}

type StageGetter = fn(&StageTimings) -> Duration;

const STAGES: [(&str, StageGetter); 4] = [
    ("graph_construction", |t| t.graph),
    ("backtrace", |t| t.backtrace),
    ("feature_extraction", |t| t.features),
    ("ranking", |t| t.ranking),
];

/// Times the pipeline on synthetic traces of each size, single-threaded.
/// `warmup` runs per size are discarded; `runs` are measured, each on a
/// differently seeded trace.
pub fn runtime_bench(analyzer: &Analyzer, sizes: &[usize], runs: usize, warmup: usize, seed: u64) -> Result<RuntimeReport> {
    if runs == 0 || sizes.is_empty() {
        return Err(Error::InvalidArgument("runtime bench needs sizes and at least one run".into()));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    let mut stage_totals: BTreeMap<&'static str, f64> = BTreeMap::new();
    for &size in sizes {
        let traces: Vec<_> = (0..runs).map(|r| synthetic_trace(size, seed ^ r as u64)).collect();
        for t in traces.iter().cycle().take(warmup) {
            analyzer.rank_timed(t, size)?;
        }
        let mut samples = Vec::with_capacity(runs);
        for t in &traces {
            samples.push(analyzer.rank_timed(t, size)?.1);
        }
        let totals: Vec<f64> = samples.iter().map(|t| t.total().as_secs_f64() * 1e3).collect();
        let mut sorted = totals.clone();
        sorted.sort_by(f64::total_cmp);
        let stages: BTreeMap<&'static str, StageStat> = STAGES
            .iter()
            .map(|(name, f)| {
                let xs: Vec<f64> = samples.iter().map(|t| f(t).as_secs_f64() * 1e3).collect();
                (*name, stat(&xs))
            })
            .collect();
        for (name, s) in &stages {
            *stage_totals.entry(name).or_default() += s.mean_ms;
        }
        let all = stat(&totals);
        rows.push(RuntimeRow {
            steps: size,
            runs,
            mean_ms: all.mean_ms,
            std_ms: all.std_ms,
            p95_ms: quantile_sorted(&sorted, 0.95),
            stages,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.steps as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean_ms).collect();
    let fit = if rows.len() >= 2 {
        linear_fit(&xs, &ys)?
    } else {
        LinearFit {
            slope: 0.0,
            intercept: ys[0],
            r_squared: 1.0,
        }
    };
    let dominant_stage = stage_totals
        .iter()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| *k)
        .expect("four stages");
    Ok(RuntimeReport {
        rows,
        fit,
        dominant_stage,
    })
}
