use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::trace::{Domain, ExecutionTrace};

use super::{render_clean, DomainTemplate};

/// A clean software-development trace of exactly `len` steps, for timing runs.
pub fn synthetic_trace(len: usize, seed: u64) -> ExecutionTrace {
    assert!(len >= 1, "a trace needs at least one step");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = DomainTemplate::for_domain(Domain::Coding);
    render_clean(t, format!("synthetic_{len}_{seed}"), len, &mut rng).trace
}
