//! Survival probabilities `P(S >= s)` by the Lugannani–Rice formula with a
//! second-order continuity correction.
//!
//! With `u` solving `K'(u) = s`:
//!
//! ```text
//! w  = sign(u) sqrt(2 u K'(u) - 2 K(u))
//! u1 = (1 - e^{-u}) sqrt(K''(u))
//! P3 = 1 - Phi(w) - phi(w) (1/w - 1/u1)
//!
//! u2 = u sqrt(K''),  k3 = K''' / K''^{3/2},  k4 = K'''' / K''^2
//! P4 = P3 - phi(w) [ (k4/8 - 5 k3^2/24) / u2 - 1/u2^3 - k3 / (2 u2^2) + 1/w^3 ]
//! ```
//!
//! `w^2 / 2 = u K' - K` is a sum of relative entropies and is evaluated as
//! such. The bracket in `P4` cancels to `O(1)` as `u -> 0`; for small `u2` it
//! is replaced by its Taylor series in `u`, with coefficients from the
//! derivatives of `K` at 0.
//!
//! Near the mean, where `u -> 0` and the reciprocals blow up, the analytic
//! limit `1/2 - [K'''(0) / (6 K''(0)^{3/2}) - 1 / (2 sqrt K''(0))] / sqrt(2 pi)`
//! is used, less `phi(0)` times the limit of the bracket.

use crate::cgf::{eval_unchecked, legendre_gap, CgfDerivatives};
use crate::density::log_boundary_masses;
use crate::model::{BinomialMixture, DegenerateSplit};
use crate::normal::{std_normal_pdf, std_normal_sf, INV_SQRT_2PI};
use crate::solver::solve_saddlepoint_from;

/// `|u|` below which the mean-case limit replaces the regular formula.
pub const MEAN_CASE_THRESHOLD: f64 = 1e-5;

/// `|u2|` below which the second-order bracket is taken from its series.
const BRACKET_SERIES_THRESHOLD: f64 = 2e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailBranch {
    /// Lugannani–Rice with the second-order correction.
    Regular,
    /// `|u|` below [`MEAN_CASE_THRESHOLD`]; analytic limit at the mean.
    MeanCase,
    /// Outside the solvable range; the value is exact.
    Boundary,
}

/// Intermediate quantities of the regular branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailDiagnostics {
    pub u_hat: f64,
    pub w_hat: f64,
    pub u1_hat: f64,
    pub u2_hat: f64,
    pub kappa3: f64,
    pub kappa4: f64,
    /// Survival before the second-order correction.
    pub first_order: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailResult {
    pub s: i64,
    pub survival: f64,
    pub branch: TailBranch,
    pub diagnostics: Option<TailDiagnostics>,
}

/// Survival evaluator for one mixture. Holds the degenerate split and the
/// exact boundary masses so repeated queries only pay for a solve.
#[derive(Debug, Clone)]
pub struct TailApprox {
    split: DegenerateSplit,
    /// `(P(S_active = 0), P(S_active = N_active))`
    boundary: (f64, f64),
    origin: Option<CgfDerivatives>,
    /// Taylor coefficients in `u` of the second-order bracket.
    bracket: [f64; 3],
}

impl TailApprox {
    pub fn new(mix: &BinomialMixture) -> Self {
        let split = mix.split_degenerate();
        let (boundary, origin, bracket) = match &split.active {
            Some(active) => {
                let (lo, hi) = log_boundary_masses(active);
                (
                    (lo.exp(), hi.exp()),
                    Some(eval_unchecked(active, 0.0)),
                    bracket_series(active),
                )
            }
            None => ((1.0, 1.0), None, [0.0; 3]),
        };
        Self {
            split,
            boundary,
            origin,
            bracket,
        }
    }

    /// Largest value `S` can take.
    pub fn support_max(&self) -> u64 {
        self.split.offset + self.split.active_total()
    }

    pub fn support_min(&self) -> u64 {
        self.split.offset
    }

    /// `P(S >= s)`.
    pub fn survival(&self, s: i64) -> TailResult {
        let boundary = |survival: f64| TailResult {
            s,
            survival,
            branch: TailBranch::Boundary,
            diagnostics: None,
        };
        let (active, origin) = match (&self.split.active, &self.origin) {
            (Some(a), Some(o)) => (a, o),
            _ => return boundary(if s <= self.split.offset as i64 { 1.0 } else { 0.0 }),
        };
        // Shift into the active support 0..=n.
        let k = s as i128 - self.split.offset as i128;
        let n = active.total() as i128;
        if k <= 0 {
            return boundary(1.0);
        }
        if k > n {
            return boundary(0.0);
        }
        if k == n {
            return boundary(self.boundary.1);
        }
        if k == 1 {
            return boundary(1.0 - self.boundary.0);
        }

        let t = k as f64;
        let root = match solve_saddlepoint_from(active, t, None) {
            Ok(r) => r,
            // Only reachable through a solver bug; use the normal tail.
            Err(_) => {
                let z = (t - origin.k1) / origin.k2.sqrt();
                return TailResult {
                    s,
                    survival: std_normal_sf(z),
                    branch: TailBranch::Regular,
                    diagnostics: None,
                };
            }
        };
        let d = root.root;
        if d.u.abs() < MEAN_CASE_THRESHOLD {
            return TailResult {
                s,
                survival: self.bound(mean_case(origin, self.bracket[0])),
                branch: TailBranch::MeanCase,
                diagnostics: None,
            };
        }

        let (survival, diag) = regular(&d, legendre_gap(active, d.u), &self.bracket);
        TailResult {
            s,
            survival: self.bound(survival),
            branch: TailBranch::Regular,
            diagnostics: Some(diag),
        }
    }
}

fn mean_case(origin: &CgfDerivatives, bracket0: f64) -> f64 {
    let sd = origin.k2.sqrt();
    0.5 - INV_SQRT_2PI * (origin.k3 / (6.0 * origin.k2 * sd) - 1.0 / (2.0 * sd) + bracket0)
}

/// Series coefficients `[B0, B1, B2]` of the second-order bracket,
/// `B(u) = B0 + B1 u + B2 u^2 + O(u^3)`, from the cumulants `c_j = K^(j)(0)`.
fn bracket_series(active: &BinomialMixture) -> [f64; 3] {
    // Bernoulli cumulants 2..=7 at success probability p, with v = p (1 - p).
    let mut c = [0.0f64; 8];
    for (n, p) in active.components() {
        let n = n as f64;
        let v = p * (1.0 - p);
        let skew = 1.0 - 2.0 * p;
        c[2] += n * v;
        c[3] += n * v * skew;
        c[4] += n * v * (1.0 - 6.0 * v);
        c[5] += n * v * skew * (1.0 - 12.0 * v);
        c[6] += n * v * (1.0 - 30.0 * v + 120.0 * v * v);
        c[7] += n * v * skew * (1.0 - 60.0 * v + 360.0 * v * v);
    }
    let [_, _, c2, c3, c4, c5, c6, c7] = c;
    let b0 = (54.0 * c2 * c2 * c5 - 225.0 * c2 * c3 * c4 + 175.0 * c3.powi(3)) / (2160.0 * c2.powf(4.5));
    let b1 = (24.0 * c2.powi(3) * c6 - 168.0 * c2 * c2 * c3 * c5 - 105.0 * c2 * c2 * c4 * c4
        + 630.0 * c2 * c3 * c3 * c4
        - 385.0 * c3.powi(4))
        / (1152.0 * c2.powf(5.5));
    let b2 = (216.0 * c2.powi(4) * c7 - 2100.0 * c2.powi(3) * c3 * c6 - 3528.0 * c2.powi(3) * c4 * c5
        + 11466.0 * c2 * c2 * c3 * c3 * c5
        + 15435.0 * c2 * c2 * c3 * c4 * c4
        - 41895.0 * c2 * c3.powi(3) * c4
        + 20482.0 * c3.powi(5))
        / (24192.0 * c2.powf(6.5));
    [b0, b1, b2]
}

/// `gap` is `u K'(u) - K(u)`.
fn regular(d: &CgfDerivatives, gap: f64, bracket: &[f64; 3]) -> (f64, TailDiagnostics) {
    let u = d.u;
    let sd = d.k2.sqrt();
    let w = u.signum() * (2.0 * gap.max(0.0)).sqrt();
    let u1 = -(-u).exp_m1() * sd;
    let phi = std_normal_pdf(w);
    let first_order = std_normal_sf(w) - phi * (1.0 / w - 1.0 / u1);

    let u2 = u * sd;
    let kappa3 = d.k3 / (d.k2 * sd);
    let kappa4 = d.k4 / (d.k2 * d.k2);
    let correction = if u2.abs() < BRACKET_SERIES_THRESHOLD {
        bracket[0] + u * (bracket[1] + u * bracket[2])
    } else {
        (kappa4 / 8.0 - 5.0 * kappa3 * kappa3 / 24.0) / u2 - 1.0 / (u2 * u2 * u2) - kappa3 / (2.0 * u2 * u2)
            + 1.0 / (w * w * w)
    };
    let survival = first_order - phi * correction;
    (
        survival,
        TailDiagnostics {
            u_hat: u,
            w_hat: w,
            u1_hat: u1,
            u2_hat: u2,
            kappa3,
            kappa4,
            first_order,
        },
    )
}

impl TailApprox {
    /// Clamps an interior survival value to `[P(S=N), 1 - P(S=0)]`, the exact
    /// range of `P(S >= s)` for `1 < s < N`.
    fn bound(&self, survival: f64) -> f64 {
        survival.min(1.0 - self.boundary.0).max(self.boundary.1)
    }
}

pub fn survival(mix: &BinomialMixture, s: i64) -> TailResult {
    TailApprox::new(mix).survival(s)
}

impl TailApprox {
    /// `P(S <= q)` (lower tail) or `P(S > q)`, optionally as natural logs.
    pub fn cdf_at(&self, q: &[i64], lower_tail: bool, log_scale: bool) -> Vec<f64> {
        q.iter()
            .map(|&q| {
                let v = self.cdf_one(q, lower_tail).clamp(0.0, 1.0);
                if log_scale {
                    v.ln()
                } else {
                    v
                }
            })
            .collect()
    }

    pub(crate) fn cdf_one(&self, q: i64, lower_tail: bool) -> f64 {
        // P(S <= min) is the exact lower boundary mass.
        if q == self.support_min() as i64 && self.split.active.is_some() {
            let lo = self.boundary.0;
            return if lower_tail { lo } else { 1.0 - lo };
        }
        let upper = self.survival(q.saturating_add(1)).survival;
        if lower_tail {
            1.0 - upper
        } else {
            upper
        }
    }
}

pub fn cdf_at(mix: &BinomialMixture, q: &[i64], lower_tail: bool, log_scale: bool) -> Vec<f64> {
    TailApprox::new(mix).cdf_at(q, lower_tail, log_scale)
}
