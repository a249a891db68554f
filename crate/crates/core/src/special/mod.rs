//! Special functions behind every constant: Stirling and Bell numbers, the
//! Poisson moment series (fractional Bell numbers and the generalized Bell
//! function), `I_n(1)` and the integer polynomials `P_2m`.

mod bessel;
mod combinatorics;
mod moments;
mod poly;

pub use bessel::{bessel_in_one, bessel_in_one_integral, bessel_correction, ln_bessel_in_one, trapezoid_cos_coefficients, TRAPEZOID_PANELS};
pub use combinatorics::{bell_number, bell_numbers, binomial, stirling2, stirling2_table, COMBINATORICS_CAP};
pub use moments::{bell_moment, generalized_bell};
pub(crate) use moments::peak_hint;
pub use poly::{poly_p, IntPolynomial, POLY_CAP};

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln n!`
pub fn ln_factorial(n: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// Digamma `ψ(x)` for `x > 0`: upward recurrence to `x >= 10`, then the
/// asymptotic series.
pub fn digamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Bernoulli terms B_2k / (2k x^2k), k = 1..6
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    acc + x.ln() - 0.5 * inv - series
}
