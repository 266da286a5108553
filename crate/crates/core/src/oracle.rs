//! Exact reference distribution and Monte Carlo sampling.
//!
//! The exact pmf is built by pairwise convolution: compute each component's
//! binomial pmf, convolve the first two, then fold in the remaining components
//! one at a time. Cost is `O(m N^2)` in the worst case, so table size is
//! capped by [`EXACT_TABLE_LIMIT`].

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::BinomialMixture;

/// Largest support (`N + 1` entries) the exact oracle will build.
pub const EXACT_TABLE_LIMIT: u64 = 1_000_000;

/// Components with at most this many trials are drawn by counting Bernoulli
/// successes; larger ones by inverting a precomputed CDF.
pub const COUNTING_DRAW_MAX_TRIALS: u64 = 64;

/// Name of the sampling stream. Changing the generator or the per-component
/// draw algorithm must bump this.
pub const SAMPLER_VERSION: &str = "chacha8-count64-inv/1";

/// Exact probabilities over the support `0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPmf {
    pub mass: Vec<f64>,
}

impl ExactPmf {
    pub fn support_max(&self) -> u64 {
        self.mass.len() as u64 - 1
    }

    /// Running sums `P(S <= s)`.
    pub fn cdf(&self) -> Vec<f64> {
        cumulative(&self.mass)
    }
}

pub(crate) fn cumulative(mass: &[f64]) -> Vec<f64> {
    mass.iter()
        .scan(0.0, |acc, &m| {
            *acc += m;
            Some(*acc)
        })
        .collect()
}

/// Pmf of a single `Bin(n, p)` over `0..=n`.
///
/// Weights are propagated outward from the mode with the ratio
/// `P(k+1)/P(k) = (n-k) p / ((k+1)(1-p))` and normalized at the end, so no
/// factorials appear and extreme tails underflow to zero instead of poisoning
/// the table. The end masses are the exact products `(1-p)^n` and `p^n`.
pub fn binomial_pmf(n: u64, p: f64) -> Vec<f64> {
    let len = n as usize + 1;
    if p == 0.0 {
        let mut v = vec![0.0; len];
        v[0] = 1.0;
        return v;
    }
    if p == 1.0 {
        let mut v = vec![0.0; len];
        v[n as usize] = 1.0;
        return v;
    }
    let nf = n as f64;
    let odds = p / (1.0 - p);
    let mode = (((nf + 1.0) * p).floor() as usize).min(n as usize);

    let mut w = vec![0.0; len];
    w[mode] = 1.0;
    for k in mode..n as usize {
        w[k + 1] = w[k] * (nf - k as f64) / (k as f64 + 1.0) * odds;
    }
    for k in (1..=mode).rev() {
        w[k - 1] = w[k] * k as f64 / (nf - k as f64 + 1.0) / odds;
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    if n >= 2 {
        let last = n as usize;
        w[0] = (nf * (-p).ln_1p()).exp();
        w[last] = (nf * p.ln()).exp();
        let interior: f64 = w[1..last].iter().sum();
        if interior > 0.0 {
            let scale = (1.0 - w[0] - w[last]) / interior;
            w[1..last].iter_mut().for_each(|x| *x *= scale);
        }
    }
    w
}

/// Full discrete convolution of two pmfs.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}

pub fn exact_pmf(mix: &BinomialMixture) -> Result<ExactPmf> {
    let entries = mix.total() + 1;
    if entries > EXACT_TABLE_LIMIT {
        return Err(Error::GuardExceeded {
            entries,
            limit: EXACT_TABLE_LIMIT,
        });
    }
    let mut comps = mix.components().map(|(n, p)| binomial_pmf(n, p));
    let first = comps.next().ok_or(Error::Empty)?;
    let mass = comps.fold(first, |acc, next| convolve(&acc, &next));
    Ok(ExactPmf { mass })
}

/// Per-component sampling plan, prepared once per `sample` call.
enum Component {
    Counting { trials: u64, threshold: u64 },
    Inversion { cdf: Vec<f64> },
}

impl Component {
    fn new(n: u64, p: f64) -> Self {
        if n <= COUNTING_DRAW_MAX_TRIALS {
            // P(next_u64 < threshold) = threshold / 2^64 = p (to 2^-64).
            let threshold = (p * 18_446_744_073_709_551_616.0) as u64;
            Component::Counting { trials: n, threshold }
        } else {
            let mut cdf = cumulative(&binomial_pmf(n, p));
            *cdf.last_mut().expect("n >= 1") = 1.0;
            Component::Inversion { cdf }
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> u64 {
        match self {
            Component::Counting { trials, threshold } => {
                (0..*trials).map(|_| u64::from(rng.next_u64() < *threshold)).sum()
            }
            Component::Inversion { cdf } => {
                let u = unit_f64(rng);
                cdf.partition_point(|&c| c <= u).min(cdf.len() - 1) as u64
            }
        }
    }
}

/// Uniform on `[0, 1)` with 53 random bits.
fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `count` independent draws of `S`, each the sum of one exact binomial draw
/// per component. Deterministic in `seed`.
pub fn sample(mix: &BinomialMixture, count: usize, seed: u64) -> Result<Vec<u64>> {
    if count == 0 {
        return Err(Error::EmptyDraws);
    }
    let split = mix.split_degenerate();
    let plan: Vec<Component> = split
        .active
        .iter()
        .flat_map(|a| a.components())
        .map(|(n, p)| Component::new(n, p))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| split.offset + plan.iter().map(|c| c.draw(&mut rng)).sum::<u64>())
        .collect())
}

/// Relative frequency of each value in `0..=support_max`. Draws above
/// `support_max` are counted in the denominator only.
pub fn empirical_pmf(draws: &[u64], support_max: u64) -> Result<Vec<f64>> {
    if draws.is_empty() {
        return Err(Error::EmptyDraws);
    }
    let mut counts = vec![0u64; support_max as usize + 1];
    for &d in draws {
        if let Some(c) = counts.get_mut(d as usize) {
            *c += 1;
        }
    }
    let total = draws.len() as f64;
    Ok(counts.into_iter().map(|c| c as f64 / total).collect())
}
