//! The binomial-mixture model: `S = X_1 + ... + X_m` with `X_i ~ Bin(n_i, p_i)`
//! independent.

use crate::error::{Error, Result};

/// Paired trial counts and success probabilities of the constituent binomials.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialMixture {
    sizes: Vec<u64>,
    probs: Vec<f64>,
    total: u64,
}

impl BinomialMixture {
    /// Validates and builds a mixture. A length-1 `sizes` or `probs` is
    /// broadcast against the other input; any other length mismatch is an
    /// error.
    pub fn new(sizes: &[i64], probs: &[f64]) -> Result<Self> {
        if sizes.is_empty() || probs.is_empty() {
            return Err(Error::Empty);
        }
        let len = match (sizes.len(), probs.len()) {
            (a, b) if a == b => a,
            (1, b) => b,
            (a, 1) => a,
            (a, b) => return Err(Error::LengthMismatch { sizes: a, probs: b }),
        };
        let pick = |v: usize, i: usize| if v == 1 { 0 } else { i };

        let mut out_sizes = Vec::with_capacity(len);
        let mut out_probs = Vec::with_capacity(len);
        let mut total: u64 = 0;
        for i in 0..len {
            let n = sizes[pick(sizes.len(), i)];
            let p = probs[pick(probs.len(), i)];
            if n < 1 {
                return Err(Error::NonPositiveSize { index: i, value: n });
            }
            // NaN fails the range check too.
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ProbabilityOutOfRange { index: i, value: p });
            }
            let n = n as u64;
            total = total.checked_add(n).ok_or(Error::TotalOverflow)?;
            out_sizes.push(n);
            out_probs.push(p);
        }
        // Tables index 0..=N, so N + 1 must fit in usize.
        if usize::try_from(total).ok().and_then(|t| t.checked_add(1)).is_none() {
            return Err(Error::TotalOverflow);
        }
        Ok(Self {
            sizes: out_sizes,
            probs: out_probs,
            total,
        })
    }

    /// Builds from already validated parts. Callers guarantee the invariants.
    fn from_parts(sizes: Vec<u64>, probs: Vec<f64>) -> Self {
        let total = sizes.iter().sum();
        Self { sizes, probs, total }
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of constituent binomials `m`.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Total number of trials `N = sum n_i`, the upper end of the support.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn components(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.sizes.iter().copied().zip(self.probs.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        self.components().map(|(n, p)| n as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        self.components().map(|(n, p)| n as f64 * p * (1.0 - p)).sum()
    }

    /// True when every `p_i` lies strictly inside `(0, 1)`.
    pub fn is_interior(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0 && p < 1.0)
    }

    /// Concatenates two mixtures into the mixture of their independent sum.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let total = self.total.checked_add(other.total).ok_or(Error::TotalOverflow)?;
        let mut sizes = self.sizes.clone();
        sizes.extend_from_slice(&other.sizes);
        let mut probs = self.probs.clone();
        probs.extend_from_slice(&other.probs);
        Ok(Self { sizes, probs, total })
    }

    /// Separates components with `p_i` in `{0, 1}` from the rest.
    pub fn split_degenerate(&self) -> DegenerateSplit {
        let mut sizes = Vec::new();
        let mut probs = Vec::new();
        let mut offset = 0;
        let mut dropped = 0;
        for (n, p) in self.components() {
            if p == 0.0 {
                dropped += n;
            } else if p == 1.0 {
                offset += n;
            } else {
                sizes.push(n);
                probs.push(p);
            }
        }
        let active = (!sizes.is_empty()).then(|| Self::from_parts(sizes, probs));
        DegenerateSplit {
            active,
            offset,
            dropped,
        }
    }
}

/// A mixture with its deterministic components factored out:
/// `S = offset + S_active`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateSplit {
    /// Components with `p_i` strictly inside `(0, 1)`; `None` when every
    /// component was degenerate.
    pub active: Option<BinomialMixture>,
    /// Trials from components with `p_i = 1`.
    pub offset: u64,
    /// Trials from components with `p_i = 0`.
    pub dropped: u64,
}

impl DegenerateSplit {
    pub fn active_total(&self) -> u64 {
        self.active.as_ref().map_or(0, BinomialMixture::total)
    }

    /// Total trials of the original mixture.
    pub fn original_total(&self) -> u64 {
        self.offset + self.active_total() + self.dropped
    }
}

/// Free-function form of [`BinomialMixture::split_degenerate`].
pub fn split_degenerate(mix: &BinomialMixture) -> DegenerateSplit {
    mix.split_degenerate()
}
