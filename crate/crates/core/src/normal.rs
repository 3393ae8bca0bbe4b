//! Standard normal distribution function.

use core::f64::consts::{FRAC_1_SQRT_2, PI};

/// `Phi(x)`, via the complementary error function.
///
/// `erfc` keeps full relative accuracy in the lower tail, so no cancellation
/// occurs for negative `x`.
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// `1 - Phi(x)`, accurate in the upper tail.
pub fn sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

pub fn pdf(x: f64) -> f64 {
    libm::exp(-0.5 * x * x) / libm::sqrt(2.0 * PI)
}
