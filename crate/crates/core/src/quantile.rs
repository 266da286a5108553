//! Quantile function and random generation.

use crate::error::{Error, Result};
use crate::model::BinomialMixture;
use crate::oracle;
use crate::tail::TailApprox;

/// One quantile request: a probability with its tail and scale flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileQuery {
    pub p: f64,
    pub lower_tail: bool,
    pub log_scale: bool,
}

impl QuantileQuery {
    pub fn lower(p: f64) -> Self {
        Self {
            p,
            lower_tail: true,
            log_scale: false,
        }
    }

    /// The lower-tail probability this query asks for.
    pub fn decode(&self) -> Result<f64> {
        let p = if self.log_scale { self.p.exp() } else { self.p };
        let p = if self.lower_tail { p } else { 1.0 - p };
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(p)
    }
}

/// Smallest `s` in `0..=N` with `P(S <= s) >= p`, by bisection on the
/// saddlepoint cdf. `p = 1` maps to `N`.
pub fn quantile(mix: &BinomialMixture, queries: &[QuantileQuery]) -> Result<Vec<u64>> {
    let tail = TailApprox::new(mix);
    queries
        .iter()
        .map(|q| q.decode().map(|p| quantile_one(&tail, mix.total(), p)))
        .collect()
}

pub(crate) fn quantile_one(tail: &TailApprox, total: u64, p: f64) -> u64 {
    if p >= 1.0 {
        return total;
    }
    if p <= 0.0 {
        return 0;
    }
    // Invariant: cdf(hi) >= p, and cdf(s) < p for all s < lo.
    let (mut lo, mut hi) = (0u64, total);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if tail.cdf_one(mid as i64, true).clamp(0.0, 1.0) >= p {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Exact draws of `S` (component-wise binomial sampling, not inversion of the
/// approximate cdf).
pub fn random(mix: &BinomialMixture, count: usize, seed: u64) -> Result<Vec<u64>> {
    oracle::sample(mix, count, seed)
}
