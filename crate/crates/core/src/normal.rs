//! Standard normal distribution.

use std::f64::consts::FRAC_1_SQRT_2;

/// `1 / sqrt(2 pi)`
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Low part of `1 / sqrt(2)`: `FRAC_1_SQRT_2 + FRAC_1_SQRT_2_LO` is exact to
/// about 1e-33.
const FRAC_1_SQRT_2_LO: f64 = -4.833646656726457e-17;

/// `2 / sqrt(pi)`
const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// `erfc(y / sqrt(2))`.
///
/// Rounding `y / sqrt(2)` to a double perturbs `erfc` by a relative
/// `2 z |dz|`, which reaches ~5e-15 by `y = 8`. The rounding error `dz` is
/// recovered with an FMA and removed with one Taylor term.
fn erfc_scaled(y: f64) -> f64 {
    let z = y * FRAC_1_SQRT_2;
    let dz = y.mul_add(FRAC_1_SQRT_2, -z) + y * FRAC_1_SQRT_2_LO;
    libm::erfc(z) - FRAC_2_SQRT_PI * (-z * z).exp() * dz
}

/// `Phi(x)`, via `erfc` so the lower tail keeps full relative precision.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc_scaled(-x)
}

/// `1 - Phi(x)` without cancellation.
pub fn std_normal_sf(x: f64) -> f64 {
    0.5 * erfc_scaled(x)
}

pub fn std_normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}
