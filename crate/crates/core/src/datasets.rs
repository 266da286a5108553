//! Reference mixtures used by the experiments and tests.

use crate::model::BinomialMixture;

/// Trial counts of the ten-unit health-system monitoring dataset.
pub const HEALTHCARE_SIZES: [i64; 10] = [12, 14, 4, 2, 20, 17, 11, 1, 8, 11];

/// Per-trial event probabilities of the ten-unit monitoring dataset.
pub const HEALTHCARE_PROBS: [f64; 10] = [0.074, 0.039, 0.095, 0.039, 0.053, 0.043, 0.067, 0.018, 0.099, 0.045];

pub fn healthcare_monitoring() -> BinomialMixture {
    BinomialMixture::new(&HEALTHCARE_SIZES, &HEALTHCARE_PROBS).expect("dataset is valid")
}

/// `Bin(m, p) + Bin(n, p)`, which is exactly `Bin(m + n, p)`.
pub fn two_binomial(m: u64, n: u64, p: f64) -> crate::Result<BinomialMixture> {
    BinomialMixture::new(&[m as i64, n as i64], &[p])
}
