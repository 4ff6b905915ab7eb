//! Fixtures shared by the criterion benches.

use tracefault_core::benchgen::synthetic_trace;
use tracefault_core::{ExecutionTrace, Scenario};

pub const BENCH_SEED: u64 = 42;

/// Synthetic traces for each requested length, seeded by the length.
pub fn traces(sizes: &[usize]) -> Vec<(usize, ExecutionTrace)> {
    sizes.iter().map(|&n| (n, synthetic_trace(n, BENCH_SEED ^ n as u64))).collect()
}

/// The held-out validation scenarios used for weight search.
pub fn validation() -> Vec<Scenario> {
    tracefault_core::benchgen::generate_validation(tracefault_core::benchgen::DEFAULT_SPLIT_SEED)
        .expect("validation split generates")
        .into_iter()
        .map(|g| g.scenario)
        .collect()
}

/// First `n` scenarios of the default benchmark.
pub fn benchmark_prefix(n: usize) -> Vec<Scenario> {
    tracefault_core::benchgen::default_benchmark()
        .expect("benchmark generates")
        .into_iter()
        .take(n)
        .map(|g| g.scenario)
        .collect()
}
