use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Root cause localization for multi-agent execution traces.
#[derive(Debug, Parser)]
#[command(name = "tracefault", version, about, long_about = None)]
pub struct Cli {
    /// JSON file with default settings (flags and environment take precedence)
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the synthetic benchmark, its blind split, and a validation set
    Generate(GenerateArgs),
    /// Rank root-cause candidates for one trace
    Analyze(AnalyzeArgs),
    /// Evaluate methods over a benchmark directory
    Evaluate(EvaluateArgs),
    /// Grid-search group weights on a validation set
    LearnWeights(LearnWeightsArgs),
    /// Write a blind copy of a benchmark with a separate answer key
    Blind(BlindArgs),
    /// Time the pipeline on synthetic traces of several lengths
    Bench(BenchArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct RankerArgs {
    /// Weight vector JSON (a bare vector or a learn-weights output)
    #[arg(long, value_name = "FILE")]
    pub weights: Option<PathBuf>,
    /// Maximum backward tracing depth [default: 10]
    #[arg(long, value_name = "N")]
    pub max_depth: Option<usize>,
    /// Feature configuration JSON (keywords, role weights, orientation)
    #[arg(long, value_name = "FILE")]
    pub feature_config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Generation seed [default: 42]
    #[arg(long, env = "TRACEFAULT_SEED")]
    pub seed: Option<u64>,
    /// Seed for the held-out validation set [default: 2024]
    #[arg(long)]
    pub split_seed: Option<u64>,
    /// Salt for anonymized blind ids
    #[arg(long, default_value = "tracefault")]
    pub salt: String,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Scenario or blind trace JSON
    pub trace: PathBuf,
    /// Step where the failure manifested [default: ground truth, else the last step]
    #[arg(long, value_name = "STEP")]
    pub error_node: Option<usize>,
    #[command(flatten)]
    pub ranker: RankerArgs,
    /// Include raw and normalized features for every candidate
    #[arg(long)]
    pub explain: bool,
    /// Also write the causal graph as JSON
    #[arg(long, value_name = "FILE")]
    pub dump_graph: Option<PathBuf>,
    /// Write analysis.json here instead of standard output
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Print a markdown table instead of JSON
    #[arg(long)]
    pub markdown: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Benchmark directory (annotated scenarios, or blind traces with --answers)
    pub benchmark: PathBuf,
    /// Comma-separated methods: agenttrace, llm, last, random, first
    #[arg(long, value_delimiter = ',', default_value = "agenttrace,last,random,first")]
    pub methods: Vec<String>,
    /// Answer key for a blind benchmark
    #[arg(long, value_name = "FILE")]
    pub answers: Option<PathBuf>,
    /// Replay fixture for the llm method (scenario id to completion)
    #[arg(long, value_name = "FILE")]
    pub llm_fixture: Option<PathBuf>,
    /// External command for the llm method (prompt on stdin, completion on stdout)
    #[arg(long, value_name = "CMD", conflicts_with = "llm_fixture")]
    pub llm_command: Option<String>,
    #[command(flatten)]
    pub ranker: RankerArgs,
    /// Worker threads [default: available cores]
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
    /// Exit with status 1 when any acceptance threshold fails
    #[arg(long)]
    pub check: bool,
    /// Seed for the random baseline [default: 42]
    #[arg(long, env = "TRACEFAULT_SEED")]
    pub seed: Option<u64>,
    /// Bootstrap seed [default: 12345]
    #[arg(long)]
    pub bootstrap_seed: Option<u64>,
    /// Bootstrap resamples
    #[arg(long, default_value_t = 10_000)]
    pub bootstrap_iterations: usize,
    /// Output directory for metrics, significance, timings, and report
    #[arg(long, value_name = "DIR", default_value = "results")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LearnWeightsArgs {
    /// Directory of validation scenarios
    pub validation: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub feature_config: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    pub max_depth: Option<usize>,
    /// Output file
    #[arg(long, value_name = "FILE", default_value = "weights.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BlindArgs {
    /// Benchmark directory of annotated scenarios
    pub benchmark: PathBuf,
    #[arg(long, default_value = "tracefault")]
    pub salt: String,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Trace lengths to time
    #[arg(long, value_delimiter = ',', default_value = "5,10,15,20,25")]
    pub sizes: Vec<usize>,
    /// Measured runs per size
    #[arg(long, default_value_t = 100)]
    pub runs: usize,
    /// Discarded warm-up runs per size
    #[arg(long, default_value_t = 10)]
    pub warmup: usize,
    #[arg(long, env = "TRACEFAULT_SEED")]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub ranker: RankerArgs,
    /// Output file
    #[arg(long, value_name = "FILE", default_value = "timings.json")]
    pub out: PathBuf,
}
