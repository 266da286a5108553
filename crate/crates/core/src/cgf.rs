//! Cumulant generating function of a binomial mixture,
//!
//! ```text
//! K(u) = sum_i n_i ln(1 - p_i + p_i e^u)
//! ```
//!
//! and its first four derivatives. With the tilted success probability
//! `q_i(u) = p_i e^u / (1 - p_i + p_i e^u)` and `v_i = q_i (1 - q_i)`:
//!
//! ```text
//! K'    = sum n_i q_i
//! K''   = sum n_i v_i
//! K'''  = sum n_i v_i (1 - 2 q_i)
//! K'''' = sum n_i v_i (1 - 6 v_i)
//! ```

use crate::error::{Error, Result};
use crate::model::BinomialMixture;

/// `K` and its first four derivatives at one point `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgfDerivatives {
    pub u: f64,
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
}

/// Evaluates `K` and its derivatives at `u`.
///
/// Every `p_i` must lie strictly inside `(0, 1)`; split degenerate components
/// off with [`BinomialMixture::split_degenerate`] first.
pub fn eval_cgf(mix: &BinomialMixture, u: f64) -> Result<CgfDerivatives> {
    if !u.is_finite() {
        return Err(Error::NonFinite(u));
    }
    if let Some((index, &value)) = mix.probs().iter().enumerate().find(|(_, &p)| p <= 0.0 || p >= 1.0) {
        return Err(Error::DegenerateComponent { index, value });
    }
    Ok(eval_unchecked(mix, u))
}

/// Tilted probabilities `(q, 1 - q)` and the log term `ln(1 - p + p e^u)`.
///
/// Both branches keep the exponential argument nonpositive so nothing
/// overflows; `1 - q` is formed directly rather than by subtraction.
#[inline]
fn tilt(p: f64, u: f64) -> (f64, f64, f64) {
    if u <= 0.0 {
        let e = u.exp();
        let denom = 1.0 - p + p * e;
        let log_term = (p * u.exp_m1()).ln_1p();
        (p * e / denom, (1.0 - p) / denom, log_term)
    } else {
        let e = (-u).exp();
        let denom = p + (1.0 - p) * e;
        // ln(1 - p + p e^u) = u + ln(p + (1 - p) e^{-u})
        let log_term = u + ((1.0 - p) * (-u).exp_m1()).ln_1p();
        (p / denom, (1.0 - p) * e / denom, log_term)
    }
}

/// `u K'(u) - K(u)`, evaluated as `sum n_i KL(q_i || p_i)` so that it keeps
/// full relative precision as `u -> 0`, where the direct difference cancels.
pub(crate) fn legendre_gap(mix: &BinomialMixture, u: f64) -> f64 {
    let mut total = 0.0;
    for (n, p) in mix.components() {
        let (q, r, _) = tilt(p, u);
        // q - p, without subtracting nearby numbers.
        let delta = if u <= 0.0 {
            p * (1.0 - p) * u.exp_m1() / (1.0 - p + p * u.exp())
        } else {
            -p * (1.0 - p) * (-u).exp_m1() / (p + (1.0 - p) * (-u).exp())
        };
        total += n as f64 * (relative_entropy_term(q, p, delta) + relative_entropy_term(r, 1.0 - p, -delta));
    }
    total
}

/// `a ln(a / b) - (a - b)` with `a = b + d`, which is `b f(d / b)` for
/// `f(x) = (1 + x) ln(1 + x) - x`.
fn relative_entropy_term(a: f64, b: f64, d: f64) -> f64 {
    if a <= 0.0 {
        return b;
    }
    let x = d / b;
    if x.abs() >= 0.1 {
        return a * x.ln_1p() - d;
    }
    // f(x) = sum_{k >= 2} (-1)^k x^k / (k (k - 1))
    let mut sum = 0.0;
    let mut power = -x;
    for k in 2..40 {
        power *= -x;
        let term = power / (k * (k - 1)) as f64;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    b * sum
}

pub(crate) fn eval_unchecked(mix: &BinomialMixture, u: f64) -> CgfDerivatives {
    let mut d = CgfDerivatives {
        u,
        k: 0.0,
        k1: 0.0,
        k2: 0.0,
        k3: 0.0,
        k4: 0.0,
    };
    for (n, p) in mix.components() {
        let n = n as f64;
        let (q, r, log_term) = tilt(p, u);
        let v = q * r;
        d.k += n * log_term;
        d.k1 += n * q;
        d.k2 += n * v;
        d.k3 += n * v * (r - q);
        d.k4 += n * v * (1.0 - 6.0 * v);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mix(sizes: &[i64], probs: &[f64]) -> BinomialMixture {
        BinomialMixture::new(sizes, probs).unwrap()
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn origin_gives_mean_and_variance() {
        let m = mix(&[3, 8, 1], &[0.2, 0.65, 0.9]);
        let d = eval_cgf(&m, 0.0).unwrap();
        assert_eq!(d.k, 0.0);
        assert!((d.k1 - m.mean()).abs() < 1e-14);
        assert!((d.k2 - m.variance()).abs() < 1e-14);
    }

    #[test]
    fn single_binomial_closed_form() {
        // u = ln(s (1-p) / ((n-s) p)) solves K'(u) = s for one binomial.
        let d = eval_cgf(&mix(&[10], &[0.5]), (7.0f64 / 3.0).ln()).unwrap();
        assert!((d.k1 - 7.0).abs() < 1e-13);
    }

    #[test]
    fn legendre_gap_matches_direct_and_quadratic_limit() {
        let m = mix(&[12, 30, 5], &[0.15, 0.6, 0.97]);
        for u in [-3.0, -0.7, 0.4, 2.5] {
            let d = eval_cgf(&m, u).unwrap();
            let direct = u * d.k1 - d.k;
            assert!(rel_err(legendre_gap(&m, u), direct) < 1e-12, "u={u}");
        }
        // u K' - K = K''(0) u^2 / 2 + K'''(0) u^3 / 3 + O(u^4)
        let o = eval_cgf(&m, 0.0).unwrap();
        for u in [1e-9, -1e-7, 3e-6] {
            let want = o.k2 * u * u / 2.0 + o.k3 * u * u * u / 3.0;
            assert!(rel_err(legendre_gap(&m, u), want) < 1e-9, "u={u}");
        }
        assert_eq!(legendre_gap(&m, 0.0), 0.0);
    }

    #[test]
    fn first_derivative_matches_finite_difference() {
        let m = mix(&[5, 7], &[0.2, 0.8]);
        let h = 1e-5;
        let fd = (eval_cgf(&m, 0.3 + h).unwrap().k - eval_cgf(&m, 0.3 - h).unwrap().k) / (2.0 * h);
        assert!(rel_err(eval_cgf(&m, 0.3).unwrap().k1, fd) < 1e-6);
    }

    #[test]
    fn large_arguments_saturate() {
        let m = mix(&[4, 6], &[0.3, 0.7]);
        let hi = eval_cgf(&m, 800.0).unwrap();
        assert_eq!(hi.k1, 10.0);
        assert_eq!(hi.k2, 0.0);
        assert!(hi.k.is_finite());
        let lo = eval_cgf(&m, -800.0).unwrap();
        assert_eq!(lo.k1, 0.0);
        assert!(lo.k.is_finite());
    }

    #[test]
    fn rejects_bad_input() {
        let m = mix(&[4], &[0.3]);
        assert!(matches!(eval_cgf(&m, f64::NAN), Err(Error::NonFinite(_))));
        assert!(matches!(eval_cgf(&m, f64::INFINITY), Err(Error::NonFinite(_))));
        assert_eq!(
            eval_cgf(&mix(&[4, 2], &[0.3, 1.0]), 0.0),
            Err(Error::DegenerateComponent { index: 1, value: 1.0 })
        );
    }

    fn arb_mixture() -> impl Strategy<Value = BinomialMixture> {
        prop::collection::vec((1i64..40, 0.02f64..0.98), 1..6).prop_map(|c| {
            let (s, p): (Vec<_>, Vec<_>) = c.into_iter().unzip();
            mix(&s, &p)
        })
    }

    proptest! {
        #[test]
        fn derivatives_match_finite_differences(m in arb_mixture(), u in -5.0f64..5.0) {
            let h = 1e-4;
            let lo = eval_cgf(&m, u - h).unwrap();
            let mid = eval_cgf(&m, u).unwrap();
            let hi = eval_cgf(&m, u + h).unwrap();
            let fd = |a: f64, b: f64| (b - a) / (2.0 * h);
            // Centered differences carry O(h^2) truncation; compare with a
            // relative floor so values near zero do not dominate.
            let check = |got: f64, want: f64, scale: f64| {
                prop_assert!((got - want).abs() <= 1e-5 * want.abs().max(scale),
                    "got {got} want {want}");
                Ok(())
            };
            let scale = mid.k2;
            check(mid.k1, fd(lo.k, hi.k), mid.k1.abs().max(scale))?;
            check(mid.k2, fd(lo.k1, hi.k1), scale)?;
            check(mid.k3, fd(lo.k2, hi.k2), scale)?;
            check(mid.k4, fd(lo.k3, hi.k3), scale)?;
        }

        #[test]
        fn first_derivative_increasing(m in arb_mixture(), a in -20.0f64..20.0, gap in 1e-3f64..5.0) {
            let lo = eval_cgf(&m, a).unwrap();
            let hi = eval_cgf(&m, a + gap).unwrap();
            prop_assert!(lo.k1 < hi.k1);
            prop_assert!(lo.k2 > 0.0);
        }

        #[test]
        fn additive_over_concatenation(a in arb_mixture(), b in arb_mixture(), u in -10.0f64..10.0) {
            let ka = eval_cgf(&a, u).unwrap();
            let kb = eval_cgf(&b, u).unwrap();
            let kab = eval_cgf(&a.concat(&b).unwrap(), u).unwrap();
            prop_assert!((kab.k - (ka.k + kb.k)).abs() <= 1e-12 * (1.0 + kab.k.abs()));
            prop_assert!((kab.k1 - (ka.k1 + kb.k1)).abs() <= 1e-12 * (1.0 + kab.k1.abs()));
        }

        #[test]
        fn first_derivative_limits(m in arb_mixture()) {
            let n = m.total() as f64;
            prop_assert!(eval_cgf(&m, -60.0).unwrap().k1 < 1e-6 * n);
            prop_assert!(n - eval_cgf(&m, 60.0).unwrap().k1 < 1e-6 * n);
        }
    }
}
