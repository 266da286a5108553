//! A mixture handle that caches its pmf table.

use std::sync::OnceLock;

use crate::density::{pmf_table, PmfTable};
use crate::error::Result;
use crate::model::BinomialMixture;
use crate::quantile::{self, QuantileQuery};
use crate::tail::{TailApprox, TailResult};

/// Distribution of a sum of independent binomials, with the d/p/q/r family
/// of functions. The pmf table is built on first use and shared afterwards;
/// the handle is `Send + Sync`.
#[derive(Debug)]
pub struct BinomialSum {
    mixture: BinomialMixture,
    tail: TailApprox,
    table: OnceLock<PmfTable>,
}

impl BinomialSum {
    pub fn new(mixture: BinomialMixture) -> Self {
        Self {
            tail: TailApprox::new(&mixture),
            mixture,
            table: OnceLock::new(),
        }
    }

    pub fn from_parts(sizes: &[i64], probs: &[f64]) -> Result<Self> {
        BinomialMixture::new(sizes, probs).map(Self::new)
    }

    pub fn mixture(&self) -> &BinomialMixture {
        &self.mixture
    }

    pub fn mean(&self) -> f64 {
        self.mixture.mean()
    }

    pub fn variance(&self) -> f64 {
        self.mixture.variance()
    }

    pub fn pmf_table(&self) -> Result<&PmfTable> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let built = pmf_table(&self.mixture)?;
        Ok(self.table.get_or_init(|| built))
    }

    pub fn pmf_at(&self, x: &[i64], log_scale: bool) -> Result<Vec<f64>> {
        Ok(self.pmf_table()?.at(x, log_scale))
    }

    pub fn survival(&self, s: i64) -> TailResult {
        self.tail.survival(s)
    }

    pub fn cdf_at(&self, q: &[i64], lower_tail: bool, log_scale: bool) -> Vec<f64> {
        self.tail.cdf_at(q, lower_tail, log_scale)
    }

    pub fn quantile(&self, queries: &[QuantileQuery]) -> Result<Vec<u64>> {
        queries
            .iter()
            .map(|q| {
                q.decode()
                    .map(|p| quantile::quantile_one(&self.tail, self.mixture.total(), p))
            })
            .collect()
    }

    pub fn random(&self, count: usize, seed: u64) -> Result<Vec<u64>> {
        quantile::random(&self.mixture, count, seed)
    }
}
