use super::ln_factorial;
use crate::{Error, Result};
use std::f64::consts::{LN_2, PI};

const SERIES_CAP: u64 = 3000;
const INTEGRAL_CAP: u64 = 200;
/// Below this order `2^{-n} / n!` is formed by direct multiplication.
const DIRECT_MAX: u64 = 140;

/// Panels of the periodic trapezoid rule on `[-π, π]`.
pub const TRAPEZOID_PANELS: usize = 1 << 12;

/// `Σ_k 4^{-k} n! / (k! (n+k)!)`, the factor by which `I_n(1)` exceeds its
/// leading term `2^{-n} / n!`; lies in `(1, e^{1/4})`.
pub fn bessel_correction(n: u64) -> f64 {
    let mut t = 1.0f64;
    let mut sum = 1.0f64;
    let nf = n as f64;
    for k in 1..60 {
        let kf = k as f64;
        t *= 0.25 / (kf * (nf + kf));
        sum += t;
        if t < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// `ln I_n(1)` for any order; no underflow.
pub fn ln_bessel_in_one(n: u64) -> f64 {
    -(n as f64) * LN_2 - ln_factorial(n) + bessel_correction(n).ln()
}

/// Modified Bessel function `I_n(1) = 2^{-n} Σ_k 4^{-k} / (k! (n+k)!)`.
/// Underflows to zero (or a subnormal) past order ~150; use
/// [`ln_bessel_in_one`] there.
pub fn bessel_in_one(n: u64) -> Result<f64> {
    if n > SERIES_CAP {
        return Err(Error::Capacity {
            what: "bessel order",
            value: n,
            cap: SERIES_CAP,
        });
    }
    if n <= DIRECT_MAX {
        let mut lead = 1.0f64;
        for j in 1..=n {
            lead *= 0.5 / j as f64;
        }
        Ok(lead * bessel_correction(n))
    } else {
        Ok(ln_bessel_in_one(n).exp())
    }
}

/// Discrete cosine coefficients `(1/N) Σ_j f(cos θ_j) cos(n θ_j)` of the even
/// periodic function `θ ↦ f(cos θ)` on the trapezoid nodes `θ_j = -π + 2πj/N`,
/// for `n = 0..=n_max`. Equals `(2π)^{-1} ∫_{-π}^{π} f(cos θ) cos(nθ) dθ` up
/// to aliasing, which is negligible for analytic `f` and `n << N`.
pub fn trapezoid_cos_coefficients<F: Fn(f64) -> f64>(f: F, n_max: usize) -> Vec<f64> {
    let big_n = TRAPEZOID_PANELS;
    // cos θ_j = -cos(2πj/N); cos(nθ_j) = (-1)^n cos(2π (nj mod N) / N)
    let unit: Vec<f64> = (0..big_n).map(|j| (2.0 * PI * j as f64 / big_n as f64).cos()).collect();
    let values: Vec<f64> = unit.iter().map(|&c| f(-c)).collect();
    (0..=n_max)
        .map(|n| {
            let mut acc = 0.0;
            let mut comp = 0.0;
            for (j, v) in values.iter().enumerate() {
                let x = v * unit[(n * j) % big_n] - comp;
                let t = acc + x;
                comp = (t - acc) - x;
                acc = t;
            }
            let s = acc / big_n as f64;
            if n % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect()
}

/// `(2π)^{-1} ∫_{-π}^{π} exp(cos θ) cos(nθ) dθ` by the periodic trapezoid rule.
pub fn bessel_in_one_integral(n: u64) -> Result<f64> {
    if n > INTEGRAL_CAP {
        return Err(Error::Capacity {
            what: "bessel integral order",
            value: n,
            cap: INTEGRAL_CAP,
        });
    }
    Ok(*trapezoid_cos_coefficients(f64::exp, n as usize).last().unwrap())
}
