mod args;
mod fsio;

use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde_json::json;

use tracefault_core::baselines::{CommandAdapter, CompletionAdapter, ReplayAdapter};
use tracefault_core::benchgen::{
    self, generate_validation, make_blind, verify_ground_truth, Manifest, DEFAULT_COUNTS, DEFAULT_SEED,
    DEFAULT_SPLIT_SEED,
};
use tracefault_core::eval::{check_evaluation, evaluate, render_report, runtime_bench, EvalOptions, Method};
use tracefault_core::weights::{grid_search, prepare_all, GridSpec};
use tracefault_core::{
    parse_any, serialize_scenario, serialize_trace, to_canonical_json, Analyzer, CausalGraph, Error, FeatureConfig,
    Scenario, WeightVector, DEFAULT_MAX_DEPTH,
};

use args::{AnalyzeArgs, BenchArgs, BlindArgs, Cli, Command, EvaluateArgs, GenerateArgs, LearnWeightsArgs, RankerArgs};
use fsio::{atomic_write, load_blind, load_scenarios, load_validation, read, FileConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for bad arguments, 3 for IO and schema problems, 1 otherwise.
fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(c) = cause.downcast_ref::<Error>() {
            return match c {
                Error::InvalidArgument(_) => 2,
                Error::Io(_)
                | Error::MalformedJson(_)
                | Error::SchemaViolation { .. }
                | Error::InvariantViolation { .. }
                | Error::MissingAnswers(_) => 3,
                _ => 1,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 3;
        }
    }
    1
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Generate(a) => generate(a, &cfg),
        Command::Analyze(a) => analyze(a, &cfg),
        Command::Evaluate(a) => evaluate_cmd(a, &cfg),
        Command::LearnWeights(a) => learn_weights(a, &cfg),
        Command::Blind(a) => blind(a),
        Command::Bench(a) => bench(a, &cfg),
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Error::InvalidArgument(msg.into()).into()
}

fn load_weights(path: &Path) -> Result<WeightVector> {
    let v: serde_json::Value =
        serde_json::from_slice(&read(path)?).map_err(|e| Error::MalformedJson(format!("{}: {e}", path.display())))?;
    // Accept a bare vector or the output of learn-weights.
    let inner = v.get("best").cloned().unwrap_or(v);
    let w: WeightVector = serde_json::from_value(inner).map_err(|e| Error::SchemaViolation { path: "weights".into(), message: e.to_string() })?;
    w.validate()?;
    Ok(w)
}

fn build_analyzer(r: &RankerArgs, cfg: &FileConfig) -> Result<Analyzer> {
    let config = match r.feature_config.as_ref().or(cfg.feature_config.as_ref()) {
        Some(p) => FeatureConfig::from_json(&read(p)?).with_context(|| format!("feature config {}", p.display()))?,
        None => FeatureConfig::default(),
    };
    let weights = match r.weights.as_ref().or(cfg.weights.as_ref()) {
        Some(p) => load_weights(p)?,
        None => WeightVector::default(),
    };
    let depth = r.max_depth.or(cfg.max_depth).unwrap_or(DEFAULT_MAX_DEPTH);
    if depth == 0 {
        return Err(usage("--max-depth must be at least 1"));
    }
    Ok(Analyzer::new(config, weights, depth)?)
}

fn generate(a: GenerateArgs, cfg: &FileConfig) -> Result<ExitCode> {
    let seed = a.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let split_seed = a.split_seed.or(cfg.split_seed).unwrap_or(DEFAULT_SPLIT_SEED);
    let generated = benchgen::generate_benchmark(seed, &DEFAULT_COUNTS)?;
    let validation = generate_validation(split_seed)?;
    for g in generated.iter().chain(&validation) {
        verify_ground_truth(g)?;
    }
    let out = &a.out;
    for g in &generated {
        atomic_write(&out.join("scenarios").join(format!("{}.json", g.scenario.id())), &serialize_scenario(&g.scenario))?;
    }
    for g in &validation {
        atomic_write(&out.join("validation").join(format!("{}.json", g.scenario.id())), &serialize_scenario(&g.scenario))?;
    }
    let scenarios: Vec<Scenario> = generated.iter().map(|g| g.scenario.clone()).collect();
    let blind = make_blind(&scenarios, &a.salt);
    for b in &blind.scenarios {
        atomic_write(&out.join("blind").join(format!("{}.json", b.trace.scenario_id)), &serialize_trace(&b.trace))?;
    }
    atomic_write(&out.join("answers.json"), &to_canonical_json(&blind.answers))?;
    let manifest = Manifest::from_scenarios(seed, &generated)?;
    let mut m = serde_json::to_value(&manifest)?;
    m["validation"] = json!({ "seed": split_seed, "scenario_count": validation.len() });
    m["verified"] = json!(generated.len() + validation.len());
    atomic_write(&out.join("manifest.json"), &to_canonical_json(&m))?;
    println!(
        "wrote {} scenarios, {} validation scenarios, and the blind split to {}",
        generated.len(),
        validation.len(),
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn analyze(a: AnalyzeArgs, cfg: &FileConfig) -> Result<ExitCode> {
    let analyzer = build_analyzer(&a.ranker, cfg)?;
    let bytes = read(&a.trace)?;
    let (trace, truth) = parse_any(&bytes).with_context(|| format!("parsing {}", a.trace.display()))?;
    let error = a
        .error_node
        .or(truth.map(|t| t.error_node_id))
        .unwrap_or_else(|| Analyzer::default_error_node(&trace));
    if error == 0 || error > trace.len() {
        return Err(usage(format!("--error-node {error} is not a step of a {}-step trace", trace.len())));
    }
    let diagnosis = analyzer.rank(&trace, error)?;
    let report = analyzer.report(&trace, &diagnosis, a.explain);
    if let Some(p) = &a.dump_graph {
        atomic_write(p, &to_canonical_json(&CausalGraph::build(&trace).to_dump(&trace)))?;
    }
    let body = if a.markdown {
        report.to_markdown().into_bytes()
    } else {
        to_canonical_json(&report)
    };
    match &a.out {
        Some(p) => atomic_write(p, &body)?,
        None => print!("{}", String::from_utf8_lossy(&body)),
    }
    Ok(ExitCode::SUCCESS)
}

fn evaluate_cmd(a: EvaluateArgs, cfg: &FileConfig) -> Result<ExitCode> {
    let methods = a
        .methods
        .iter()
        .map(|m| m.trim().parse::<Method>())
        .collect::<tracefault_core::Result<Vec<_>>>()?;
    let analyzer = build_analyzer(&a.ranker, cfg)?;
    if let Some(j) = a.jobs.or(cfg.jobs) {
        if j == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    let replay;
    let command;
    let adapter: Option<&(dyn CompletionAdapter + Sync)> = match (&a.llm_fixture, &a.llm_command) {
        (Some(p), _) => {
            replay = ReplayAdapter::from_json(&read(p)?)?;
            Some(&replay)
        }
        (None, Some(c)) => {
            let mut parts = c.split_whitespace().map(str::to_string);
            command = CommandAdapter {
                program: parts.next().ok_or_else(|| usage("--llm-command is empty"))?,
                args: parts.collect(),
            };
            Some(&command)
        }
        (None, None) => None,
    };
    if methods.contains(&Method::Llm) && adapter.is_none() {
        return Err(usage("the llm method needs --llm-fixture or --llm-command"));
    }
    let scenarios = match &a.answers {
        Some(ans) => load_blind(&a.benchmark, ans)?,
        None => load_scenarios(&a.benchmark)?,
    };
    if scenarios.is_empty() {
        bail!(Error::EmptyBenchmark);
    }
    let opts = EvalOptions {
        analyzer,
        methods,
        random_seed: a.seed.or(cfg.seed).unwrap_or(tracefault_core::eval::DEFAULT_RANDOM_SEED),
        bootstrap_iterations: a.bootstrap_iterations,
        bootstrap_seed: a
            .bootstrap_seed
            .or(cfg.bootstrap_seed)
            .unwrap_or(tracefault_core::stats::DEFAULT_BOOTSTRAP_SEED),
        adapter,
        ..EvalOptions::default()
    };
    let e = evaluate(&scenarios, &opts)?;
    atomic_write(&a.out.join("metrics.json"), &to_canonical_json(&e.metrics))?;
    atomic_write(&a.out.join("significance.json"), &to_canonical_json(&e.significance))?;
    atomic_write(&a.out.join("timings.json"), &to_canonical_json(&e.timings))?;
    atomic_write(&a.out.join("report.md"), render_report(&e).as_bytes())?;
    for (m, r) in &e.metrics.methods {
        println!(
            "{m:<10} Hit@1 {:.3}  Hit@3 {:.3}  Hit@5 {:.3}  MRR {:.3}",
            r.hit_at_1, r.hit_at_3, r.hit_at_5, r.mrr
        );
    }
    if a.check {
        let lines = check_evaluation(&e);
        for l in &lines {
            println!("{} {}: {}", if l.passed { "PASS" } else { "FAIL" }, l.name, l.detail);
        }
        if lines.iter().any(|l| !l.passed) {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn learn_weights(a: LearnWeightsArgs, cfg: &FileConfig) -> Result<ExitCode> {
    let ranker = RankerArgs {
        weights: None,
        max_depth: a.max_depth,
        feature_config: a.feature_config.clone(),
    };
    let analyzer = build_analyzer(&ranker, cfg)?;
    let scenarios = load_validation(&a.validation)?;
    let prepared = prepare_all(&scenarios, &analyzer.config, analyzer.max_depth)?;
    let result = grid_search(&prepared, &GridSpec::default())?;
    atomic_write(&a.out, &to_canonical_json(&result))?;
    println!(
        "best {:?} with Hit@1 {:.3} over {} grid points",
        result.best.as_array(),
        result.best_hit_at_1,
        result.table.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn blind(a: BlindArgs) -> Result<ExitCode> {
    let scenarios = load_scenarios(&a.benchmark)?;
    let b = make_blind(&scenarios, &a.salt);
    for s in &b.scenarios {
        atomic_write(&a.out.join(format!("{}.json", s.trace.scenario_id)), &serialize_trace(&s.trace))?;
    }
    atomic_write(&a.out.join("answers.json"), &to_canonical_json(&b.answers))?;
    println!("wrote {} blind traces to {}", b.scenarios.len(), a.out.display());
    Ok(ExitCode::SUCCESS)
}

fn bench(a: BenchArgs, cfg: &FileConfig) -> Result<ExitCode> {
    if a.sizes.contains(&0) {
        return Err(usage("sizes must be positive"));
    }
    let analyzer = build_analyzer(&a.ranker, cfg)?;
    let seed = a.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let report = runtime_bench(&analyzer, &a.sizes, a.runs, a.warmup, seed)?;
    atomic_write(&a.out, &to_canonical_json(&report))?;
    for r in &report.rows {
        println!("{:>3} steps: mean {:.4} ms, p95 {:.4} ms", r.steps, r.mean_ms, r.p95_ms);
    }
    println!(
        "fit: {:.4} ms/step + {:.4} ms, R^2 {:.4}; dominant stage {}",
        report.fit.slope, report.fit.intercept, report.fit.r_squared, report.dominant_stage
    );
    Ok(ExitCode::SUCCESS)
}
