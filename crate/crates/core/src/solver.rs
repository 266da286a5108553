//! Root finding for the saddlepoint equation `K'(u) = t`.
//!
//! `K'` is strictly increasing from 0 to `N` on the real line, so the root is
//! unique for every `t` in `(0, N)`. Newton steps are kept inside a bracket
//! that shrinks every iteration; a step that leaves the bracket is replaced by
//! bisection.

use crate::cgf::{eval_cgf, eval_unchecked, CgfDerivatives};
use crate::error::{Error, Result};
use crate::model::BinomialMixture;

/// Iteration cap. Exceeding it indicates a numerics bug, not bad input.
pub const MAX_ITERATIONS: usize = 200;

/// Targets closer than this to 0 or `N` are rejected.
pub const ENDPOINT_MARGIN: f64 = 1e-9;

/// Largest bracket half-width tried. `K'` is within `1e-9` of its limit well
/// before this for any representable `p_i`.
const MAX_BRACKET: f64 = 4096.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddlepointRoot {
    pub target: f64,
    /// CGF values at the root; `root.u` is the saddlepoint.
    pub root: CgfDerivatives,
    pub iterations: usize,
    pub residual: f64,
}

impl SaddlepointRoot {
    pub fn u(&self) -> f64 {
        self.root.u
    }
}

/// Residual tolerance `max(1e-12 N, 1e-12)`.
pub fn tolerance(total: u64) -> f64 {
    (1e-12 * total as f64).max(1e-12)
}

pub fn solve_saddlepoint(mix: &BinomialMixture, t: f64) -> Result<SaddlepointRoot> {
    solve_saddlepoint_from(mix, t, None)
}

/// Solves `K'(u) = t`, starting Newton from `guess` when given (a previous
/// root for a nearby target) and from `(t - mean) / variance` otherwise.
pub fn solve_saddlepoint_from(mix: &BinomialMixture, t: f64, guess: Option<f64>) -> Result<SaddlepointRoot> {
    let origin = eval_cgf(mix, 0.0)?;
    let total = mix.total();
    let n = total as f64;
    if !t.is_finite() || t < ENDPOINT_MARGIN || t > n - ENDPOINT_MARGIN {
        return Err(Error::TargetOutOfRange { target: t, total });
    }
    let tol = tolerance(total);

    if (origin.k1 - t).abs() <= tol {
        return Ok(SaddlepointRoot {
            target: t,
            root: origin,
            iterations: 0,
            residual: (origin.k1 - t).abs(),
        });
    }

    // Bracket [lo, hi] with K'(lo) < t < K'(hi), grown from the origin.
    let (mut lo, mut hi) = if t > origin.k1 {
        let (mut lo, mut hi) = (0.0, 1.0);
        while eval_unchecked(mix, hi).k1 <= t {
            if hi >= MAX_BRACKET {
                return Err(no_convergence(t, 0, f64::NAN));
            }
            lo = hi;
            hi *= 2.0;
        }
        (lo, hi)
    } else {
        let (mut lo, mut hi) = (-1.0, 0.0);
        while eval_unchecked(mix, lo).k1 >= t {
            if lo <= -MAX_BRACKET {
                return Err(no_convergence(t, 0, f64::NAN));
            }
            hi = lo;
            lo *= 2.0;
        }
        (lo, hi)
    };

    let start = guess.unwrap_or((t - origin.k1) / origin.k2);
    let mut u = if start > lo && start < hi {
        start
    } else {
        0.5 * (lo + hi)
    };

    let mut residual = f64::INFINITY;
    for iteration in 1..=MAX_ITERATIONS {
        let d = eval_unchecked(mix, u);
        let r = d.k1 - t;
        residual = r.abs();
        if residual <= tol {
            return Ok(SaddlepointRoot {
                target: t,
                root: d,
                iterations: iteration,
                residual,
            });
        }
        if r < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let newton = u - r / d.k2;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == u {
            // Bracket collapsed to adjacent floats without meeting tolerance.
            return Err(no_convergence(t, iteration, residual));
        }
        u = next;
    }
    Err(no_convergence(t, MAX_ITERATIONS, residual))
}

fn no_convergence(target: f64, iterations: usize, residual: f64) -> Error {
    Error::NoConvergence {
        target,
        iterations,
        residual,
    }
}
