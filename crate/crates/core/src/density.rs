//! Renormalized second-order saddlepoint pmf.
//!
//! At an interior point `0 < s < N` with saddlepoint `u` (`K'(u) = s`) the
//! first-order density is
//!
//! ```text
//! P1(s) = exp(K(u) - u s) / sqrt(2 pi K''(u))
//! ```
//!
//! and the second-order density multiplies it by
//! `1 + K''''/(8 K''^2) - 5 K'''^2/(24 K''^3)`. The two boundary masses are
//! known exactly, `P(S=0) = prod (1-p_i)^n_i` and `P(S=N) = prod p_i^n_i`; the
//! interior values are scaled so they carry the remaining
//! `1 - P(S=0) - P(S=N)`.

use std::f64::consts::PI;

use crate::error::Result;
use crate::model::BinomialMixture;
use crate::solver::{solve_saddlepoint_from, SaddlepointRoot};

/// `(P(S=0), P(S=N))`, from log-domain sums.
pub fn boundary_masses(mix: &BinomialMixture) -> (f64, f64) {
    let (log_lo, log_hi) = log_boundary_masses(mix);
    (log_lo.exp(), log_hi.exp())
}

/// Natural logs of [`boundary_masses`]. A component with `p_i = 1` forces
/// `P(S=0) = 0` (log `-inf`), and `p_i = 0` forces `P(S=N) = 0`.
pub fn log_boundary_masses(mix: &BinomialMixture) -> (f64, f64) {
    mix.components().fold((0.0, 0.0), |(lo, hi), (n, p)| {
        let n = n as f64;
        let lo = if p == 1.0 {
            f64::NEG_INFINITY
        } else {
            lo + n * (-p).ln_1p()
        };
        let hi = if p == 0.0 { f64::NEG_INFINITY } else { hi + n * p.ln() };
        (lo, hi)
    })
}

/// `ln P1(s)`.
pub fn log_density_first_order(root: &SaddlepointRoot, s: f64) -> f64 {
    let d = &root.root;
    d.k - d.u * s - 0.5 * (2.0 * PI * d.k2).ln()
}

pub fn density_first_order(root: &SaddlepointRoot, s: u64) -> f64 {
    log_density_first_order(root, s as f64).exp()
}

/// The second-order multiplier `1 + K''''/(8 K''^2) - 5 K'''^2/(24 K''^3)`.
pub fn second_order_factor(root: &SaddlepointRoot) -> f64 {
    let d = &root.root;
    let k2sq = d.k2 * d.k2;
    1.0 + d.k4 / (8.0 * k2sq) - 5.0 * d.k3 * d.k3 / (24.0 * k2sq * d.k2)
}

/// `ln P2(s)`, or `-inf` when the correction factor is not positive.
fn log_density_second_order(root: &SaddlepointRoot, s: f64) -> f64 {
    let factor = second_order_factor(root);
    if factor > 0.0 {
        log_density_first_order(root, s) + factor.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Second-order density, clamped below at zero.
pub fn density_second_order(root: &SaddlepointRoot, s: u64) -> f64 {
    log_density_second_order(root, s as f64).exp()
}

/// Approximate probabilities over the full support `0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfTable {
    pub mass: Vec<f64>,
}

impl PmfTable {
    pub fn support_max(&self) -> u64 {
        self.mass.len() as u64 - 1
    }

    /// Mass at each `x`; zero (or `-inf` on the log scale) outside `0..=N`.
    pub fn at(&self, x: &[i64], log_scale: bool) -> Vec<f64> {
        x.iter()
            .map(|&s| {
                let m = usize::try_from(s)
                    .ok()
                    .and_then(|i| self.mass.get(i))
                    .copied()
                    .unwrap_or(0.0);
                if log_scale {
                    m.ln()
                } else {
                    m
                }
            })
            .collect()
    }

    pub fn cdf(&self) -> Vec<f64> {
        crate::oracle::cumulative(&self.mass)
    }
}

/// Builds the renormalized pmf over `0..=N` for any valid mixture.
///
/// Degenerate components shift or shrink the support; an all-degenerate
/// mixture yields a point mass without touching the solver.
pub fn pmf_table(mix: &BinomialMixture) -> Result<PmfTable> {
    let split = mix.split_degenerate();
    let mut mass = vec![0.0; mix.total() as usize + 1];
    let offset = split.offset as usize;
    match &split.active {
        None => mass[offset] = 1.0,
        Some(active) => {
            let inner = interior_table(active)?;
            mass[offset..offset + inner.len()].copy_from_slice(&inner);
        }
    }
    // The outer boundaries are exact products of the original mixture; this
    // agrees with the shifted table and pins the bits.
    let (lo, hi) = boundary_masses(mix);
    let n = mass.len() - 1;
    if n > 0 {
        mass[0] = lo;
        mass[n] = hi;
    }
    Ok(PmfTable { mass })
}

/// Table over `0..=N` for a mixture whose probabilities are all interior.
fn interior_table(mix: &BinomialMixture) -> Result<Vec<f64>> {
    let n = mix.total() as usize;
    let (lo, hi) = boundary_masses(mix);
    let mut mass = vec![0.0; n + 1];
    mass[0] = lo;
    mass[n] = hi;
    if n < 2 {
        return Ok(mass);
    }

    // Solve each interior point, warm-starting from the previous root.
    let mut logs = Vec::with_capacity(n - 1);
    let mut guess = None;
    for s in 1..n {
        let root = solve_saddlepoint_from(mix, s as f64, guess)?;
        guess = Some(root.u());
        logs.push(log_density_second_order(&root, s as f64));
    }

    let remaining = (1.0 - lo - hi).max(0.0);
    let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return Ok(mass);
    }
    let weights: Vec<f64> = logs.iter().map(|&l| (l - peak).exp()).collect();
    let total: f64 = weights.iter().sum();
    for (m, w) in mass[1..n].iter_mut().zip(&weights) {
        *m = remaining * w / total;
    }
    Ok(mass)
}
