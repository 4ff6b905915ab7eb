//! Ranking metrics and the significance machinery used in evaluation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_BOOTSTRAP_ITERATIONS: usize = 10_000;
pub const DEFAULT_BOOTSTRAP_SEED: u64 = 12345;
pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// p-values below this are reported as a bound rather than a number.
pub const P_VALUE_FLOOR: f64 = 1e-300;

pub fn hit_at_k(ranks: &[usize], k: usize) -> Result<f64> {
    if ranks.is_empty() {
        return Err(Error::EmptyBenchmark);
    }
    Ok(ranks.iter().filter(|&&r| r <= k).count() as f64 / ranks.len() as f64)
}

pub fn mrr(ranks: &[usize]) -> Result<f64> {
    if ranks.is_empty() {
        return Err(Error::EmptyBenchmark);
    }
    Ok(ranks.iter().map(|&r| 1.0 / r as f64).sum::<f64>() / ranks.len() as f64)
}

/// Quantile with linear interpolation between order statistics
/// (`sorted` must be ascending and non-empty).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Percentile bootstrap interval for the mean of `outcomes`.
///
/// Resample indices are drawn from a ChaCha8 stream seeded with `seed`, `n`
/// draws of `gen_range(0..n)` per iteration.
pub fn bootstrap_ci(outcomes: &[f64], iterations: usize, confidence: f64, seed: u64) -> Result<(f64, f64)> {
    if outcomes.is_empty() {
        return Err(Error::EmptyBenchmark);
    }
    if iterations == 0 {
        return Err(Error::InvalidArgument("bootstrap needs at least one iteration".into()));
    }
    if !(0.0..1.0).contains(&confidence) {
        return Err(Error::InvalidArgument(format!("confidence {confidence} outside [0, 1)")));
    }
    let n = outcomes.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut means: Vec<f64> = (0..iterations)
        .map(|_| {
            let mut sum = 0.0;
            for _ in 0..n {
                sum += outcomes[rng.gen_range(0..n)];
            }
            sum / n as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let alpha = 1.0 - confidence;
    Ok((
        quantile_sorted(&means, alpha / 2.0),
        quantile_sorted(&means, 1.0 - alpha / 2.0),
    ))
}

/// Paired 2x2 table: `n01` counts pairs where only the second method is
/// correct, `n10` pairs where only the first is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contingency {
    pub n00: usize,
    pub n01: usize,
    pub n10: usize,
    pub n11: usize,
}

impl Contingency {
    pub fn from_outcomes(first: &[bool], second: &[bool]) -> Self {
        assert_eq!(first.len(), second.len(), "paired outcomes must align");
        let mut t = Contingency {
            n00: 0,
            n01: 0,
            n10: 0,
            n11: 0,
        };
        for (&a, &b) in first.iter().zip(second) {
            match (a, b) {
                (false, false) => t.n00 += 1,
                (false, true) => t.n01 += 1,
                (true, false) => t.n10 += 1,
                (true, true) => t.n11 += 1,
            }
        }
        t
    }

    pub fn total(&self) -> usize {
        self.n00 + self.n01 + self.n10 + self.n11
    }
}

/// Continuity-corrected McNemar statistic and its chi-square (1 dof) p-value.
pub fn mcnemar(n01: usize, n10: usize) -> Result<(f64, f64)> {
    let discordant = n01 + n10;
    if discordant == 0 {
        return Err(Error::DegenerateTable);
    }
    let diff = (n01 as f64 - n10 as f64).abs();
    let chi2 = (diff - 1.0).powi(2) / discordant as f64;
    Ok((chi2, chi_square_sf(chi2, 1.0)))
}

pub fn cohens_h(p1: f64, p2: f64) -> f64 {
    2.0 * p1.sqrt().asin() - 2.0 * p2.sqrt().asin()
}

/// Conventional magnitude label for an effect size.
pub fn effect_label(h: f64) -> &'static str {
    match h.abs() {
        x if x < 0.2 => "small",
        x if x < 0.5 => "medium",
        _ => "large",
    }
}

/// Survival function of the chi-square distribution.
pub fn chi_square_sf(x: f64, dof: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    regularized_gamma_q(dof / 2.0, x / 2.0)
}

/// Formats a p-value, reporting values under the floor as a bound.
pub fn format_p_value(p: f64) -> String {
    if p < P_VALUE_FLOOR {
        "< 1e-300".to_string()
    } else {
        format!("{p:.3e}")
    }
}

fn ln_gamma(x: f64) -> f64 {
    // Lanczos approximation, g = 7, n = 9.
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + 7.5;
    let mut a = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Upper regularized incomplete gamma Q(a, x): power series below `a + 1`,
/// Lentz continued fraction above.
fn regularized_gamma_q(a: f64, x: f64) -> f64 {
    const EPS: f64 = 1e-16;
    const MAX_ITER: usize = 10_000;
    if x <= 0.0 {
        return 1.0;
    }
    let log_prefactor = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * EPS {
                break;
            }
        }
        1.0 - sum * log_prefactor.exp()
    } else {
        let tiny = f64::MIN_POSITIVE / EPS;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < EPS {
                break;
            }
        }
        log_prefactor.exp() * h
    }
}
