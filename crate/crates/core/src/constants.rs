//! `K(p)`, `L(p)`, `S(p)`, `G(p)` along their independent routes.
//!
//! * series: `L(p) = e^{-1} Σ |n-1|^p / n!`, `K(p) = (2/e) Σ n^p I_n(1)`;
//! * combinatorial: exact integers from Stirling numbers at even `p`, and the
//!   `2/e + integer` form at odd `p`;
//! * accelerated: `K` from the cosine coefficients of `exp(cos θ) P_2m(cos θ)`;
//! * closed form: `S` on `(2, 4]`.

use crate::dyadic::BigRationalDyadic;
use crate::series::{LogSum, SeriesConfig, SeriesValue};
use crate::special::{
    bell_moment, bell_numbers, binomial, generalized_bell, ln_bessel_in_one, ln_factorial, ln_gamma, poly_p,
    stirling2_table, trapezoid_cos_coefficients, digamma,
};
use crate::{domain, Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, LN_2, PI};

const P_MAX: f64 = 1e6;
const EXACT_M_MAX: usize = 100;
const ACCEL_M_MAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    K,
    L,
    S,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Series,
    Combinatorial,
    Accelerated,
    ClosedForm,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Series => "series",
            Route::Combinatorial => "combinatorial",
            Route::Accelerated => "accelerated",
            Route::ClosedForm => "closed_form",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Series(SeriesValue),
    Exact(BigInt),
    Real(f64),
}

/// One evaluated constant. For `S` and `G` the value is the p-th root of the
/// underlying `K` or `L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantValue {
    pub p: f64,
    pub kind: Kind,
    pub value: Value,
    pub route: Route,
}

impl ConstantValue {
    pub fn as_f64(&self) -> f64 {
        match &self.value {
            Value::Series(s) => s.value(),
            Value::Exact(n) => n.to_f64().unwrap_or(f64::INFINITY),
            Value::Real(x) => *x,
        }
    }

    pub fn ln(&self) -> f64 {
        match &self.value {
            Value::Series(s) => s.log_value,
            Value::Exact(n) => big_ln(n),
            Value::Real(x) => x.ln(),
        }
    }

    /// Relative error bound: the series tail bound, zero for exact values.
    pub fn rel_error(&self) -> f64 {
        match &self.value {
            Value::Series(s) => s.rel_tail_bound,
            Value::Exact(_) => 0.0,
            Value::Real(_) => f64::EPSILON,
        }
    }
}

/// Natural log of a positive big integer without overflow.
pub fn big_ln(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 60;
    (n >> shift).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * LN_2
}

fn check_p(name: &str, p: f64, lo: f64) -> Result<()> {
    if !(p >= lo && p <= P_MAX) {
        return domain(format!("{name} needs {lo} <= p <= 1e6, got {p}"));
    }
    Ok(())
}

/// `L(p) = E|θ - 1|^p`, `θ ~ Poisson(1)`.
pub fn l_series(p: f64, cfg: &SeriesConfig) -> Result<SeriesValue> {
    check_p("L_series", p, 2.0)?;
    generalized_bell(1.0, p, 1.0, cfg)
}

/// `G(p) = L(p)^{1/p}`.
pub fn g_value(p: f64, cfg: &SeriesConfig) -> Result<f64> {
    if p < 4.0 {
        return domain(format!("G_value needs p >= 4, got {p}"));
    }
    Ok(l_series(p, cfg)?.root(p))
}

/// Rough location of the peak of `n^p I_n(1)`: the root of `x ln(2x) = p`.
fn k_peak_hint(p: f64) -> f64 {
    let mut x = (p / (2.0 * p).ln()).max(1.0);
    for _ in 0..4 {
        x = p / (2.0 * x).ln().max(1.0);
    }
    x
}

/// `K(p) = E|τ1 - τ2|^p = (2/e) Σ_{n≥1} n^p I_n(1)`.
pub fn k_series(p: f64, cfg: &SeriesConfig) -> Result<SeriesValue> {
    check_p("K_series", p, 2.0)?;
    let mut s = LogSum::new(cfg.tol_for(p), cfg.max_terms);
    s.add_log_concave(|n| p * (n as f64).ln() + ln_bessel_in_one(n), 1, None, k_peak_hint(p))?;
    Ok(s.finish()?.scale(LN_2 - 1.0))
}

/// `K(p) = S(p)^p` on `(2, 4]`: `1 + sqrt(2^p / π) Γ((p+1)/2)`.
pub fn k_closed_form(p: f64) -> Result<f64> {
    if !(p > 2.0 && p <= 4.0) {
        return domain(format!("closed form holds on (2, 4], got {p}"));
    }
    Ok(1.0 + ((p * LN_2 - PI.ln()) / 2.0 + ln_gamma((p + 1.0) / 2.0)).exp())
}

/// Derivative of the `(2, 4]` closed form of `K`, from the digamma function.
pub fn k_closed_form_derivative(p: f64) -> Result<f64> {
    let k = k_closed_form(p)?;
    Ok((k - 1.0) * 0.5 * (LN_2 + digamma((p + 1.0) / 2.0)))
}

/// `S(p)`: 1 at `p = 2`, the closed form on `(2, 4]`, `K(p)^{1/p}` beyond.
pub fn s_value(p: f64, cfg: &SeriesConfig) -> Result<f64> {
    if !(p >= 2.0) {
        return domain(format!("S_value needs p >= 2, got {p}"));
    }
    if p == 2.0 {
        Ok(1.0)
    } else if p <= 4.0 {
        Ok(k_closed_form(p)?.powf(1.0 / p))
    } else {
        Ok(k_series(p, cfg)?.root(p))
    }
}

fn check_m(name: &str, m: usize) -> Result<()> {
    if m == 0 || m > EXACT_M_MAX {
        return domain(format!("{name} needs 1 <= m <= {EXACT_M_MAX}, got {m}"));
    }
    Ok(())
}

/// `E τ^k` for `τ ~ Poisson(1/2)`: `Σ_q s(k, q) 2^{-q}`, `k = 0..=k_max`.
fn half_poisson_moments(table: &[Vec<BigUint>]) -> Vec<BigRationalDyadic> {
    table
        .iter()
        .map(|row| {
            row.iter().enumerate().fold(BigRationalDyadic::zero(), |acc, (q, s)| {
                &acc + &BigRationalDyadic::new(BigInt::from(s.clone()), q as u64)
            })
        })
        .collect()
}

/// `K(2m)` as the exact dyadic double sum
/// `Σ_l (-1)^l C(2m, l) Σ_q Σ_r 2^{-r-q} s(2m-l, q) s(l, r)`.
pub fn k_even_dyadic(m: usize) -> Result<BigRationalDyadic> {
    check_m("K_even_exact", m)?;
    let two_m = 2 * m;
    let table = stirling2_table(two_m)?;
    let mom = half_poisson_moments(&table);
    let mut acc = BigRationalDyadic::zero();
    for l in 0..=two_m {
        let c = BigRationalDyadic::from_int(BigInt::from(binomial(two_m, l)));
        let term = &(&c * &mom[two_m - l]) * &mom[l];
        acc = if l % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    Ok(acc)
}

/// `K(2m)`, exact.
pub fn k_even_exact(m: usize) -> Result<BigInt> {
    let d = k_even_dyadic(m)?;
    d.to_integer()
        .ok_or_else(|| Error::Inconsistency(format!("K({}) reduced to non-integer {d}", 2 * m)))
}

/// `L(2m) = Σ_l (-1)^l C(2m, l) Σ_r s(2m-l, r)`, exact.
pub fn l_even_exact(m: usize) -> Result<BigInt> {
    check_m("L_even_exact", m)?;
    let two_m = 2 * m;
    let bell = bell_numbers(two_m)?;
    Ok(alternating_bell_sum(two_m, &bell))
}

/// `Σ_{k=0}^{p} (-1)^k C(p, k) B(p-k)`.
fn alternating_bell_sum(p: usize, bell: &[BigUint]) -> BigInt {
    (0..=p).fold(BigInt::from(0), |acc, k| {
        let t = BigInt::from(binomial(p, k) * &bell[p - k]);
        if k % 2 == 0 {
            acc + t
        } else {
            acc - t
        }
    })
}

/// `L(p)` at odd integer `p`: `2/e + N_p` with `N_p` an exact integer.
#[derive(Debug, Clone, PartialEq)]
pub struct OddL {
    pub p: usize,
    pub integer_part: BigInt,
    pub value: f64,
}

pub fn l_odd_exact(p: usize) -> Result<OddL> {
    if p.is_multiple_of(2) || !(5..=199).contains(&p) {
        return domain(format!("L_odd_exact needs odd 5 <= p <= 199, got {p}"));
    }
    let bell = bell_numbers(p)?;
    let n = alternating_bell_sum(p, &bell);
    let value = n.to_f64().unwrap_or(f64::INFINITY) + 2.0 / E;
    Ok(OddL {
        p,
        integer_part: n,
        value,
    })
}

/// `K(2m) = (-1)^m P_2m(1)`.
pub fn k_via_polynomial(m: usize) -> Result<BigInt> {
    let v = poly_p(m)?.eval(&BigInt::from(1));
    Ok(if m.is_multiple_of(2) { v } else { -v })
}

/// `K(p)` after `m` integrations by parts:
/// `K(p) = (-1)^m (2/e) Σ_n n^{p-2m} c_n(m)`, `c_n(m)` the cosine coefficients
/// of `exp(cos θ) P_2m(cos θ)` by the periodic trapezoid rule.
///
/// The sum is truncated with the envelope `|c_n(m)| <= n^{2m} e^{1/4} 2^{-n} / n!`.
/// `m = 0` is [`k_series`].
pub fn k_accelerated(p: f64, m: usize, cfg: &SeriesConfig) -> Result<SeriesValue> {
    check_p("K_accelerated", p, 4.0)?;
    if m == 0 {
        return k_series(p, cfg);
    }
    if m > ACCEL_M_MAX || 2.0 * m as f64 >= p {
        return domain(format!("K_accelerated needs 1 <= m <= {ACCEL_M_MAX} and 2m < p, got m={m}, p={p}"));
    }
    let tol = cfg.rel_tol.unwrap_or(1e-10);
    let poly = poly_p(m)?;
    let envelope = |n: u64| p * (n as f64).ln() + 0.25 - (n as f64) * LN_2 - ln_factorial(n);
    // envelope peak, then terms until its geometric tail is negligible
    let mut n_stop = 1u64;
    while envelope(n_stop + 1) >= envelope(n_stop) {
        n_stop += 1;
    }
    let n_limit = (crate::special::TRAPEZOID_PANELS / 4) as u64;
    let coeffs = trapezoid_cos_coefficients(|x| x.exp() * poly.eval_f64(x), n_limit as usize);
    let reduced = p - 2.0 * m as f64;
    let mut sum = 0.0f64;
    let mut tail;
    let mut n = 1u64;
    loop {
        sum += (n as f64).powf(reduced) * coeffs[n as usize];
        let r = (envelope(n + 1) - envelope(n)).exp();
        tail = (envelope(n) - 0.0).exp() * r / (1.0 - r);
        if n >= n_stop && r < 1.0 && tail <= tol * sum.abs() {
            break;
        }
        n += 1;
        if n >= n_limit {
            return Err(Error::Budget {
                tol,
                max_terms: n_limit as usize,
                reached: tail / sum.abs(),
            });
        }
    }
    let signed = if m.is_multiple_of(2) { sum } else { -sum };
    if !(signed > 0.0) {
        return Err(Error::Inconsistency(format!("accelerated K({p}) summed to {signed}")));
    }
    Ok(SeriesValue {
        log_value: signed.ln() + LN_2 - 1.0,
        rel_tail_bound: tail / sum.abs(),
        terms_used: n as usize,
    })
}

/// A derivative value with its a-priori bound, both in log scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Derivative {
    pub series: SeriesValue,
    pub log_bound: f64,
}

impl Derivative {
    pub fn value(&self) -> f64 {
        self.series.value()
    }

    pub fn bound(&self) -> f64 {
        self.log_bound.exp()
    }
}

fn check_derivative(name: &str, p: f64, m: u32) -> Result<()> {
    check_p(name, p, 4.0)?;
    if !(1..=4).contains(&m) {
        return domain(format!("{name} needs derivative order 1..=4, got {m}"));
    }
    Ok(())
}

/// `L^{(m)}(p) = e^{-1} Σ_{n≥3} (n-1)^p ln^m(n-1) / n!` by termwise
/// differentiation, with the bound `e^{-1} (m/e)^m (e B(p) - 1)`. At `p = 4`
/// this is the right derivative.
pub fn l_derivative(p: f64, m: u32, cfg: &SeriesConfig) -> Result<Derivative> {
    check_derivative("L_derivative", p, m)?;
    let mf = m as f64;
    let mut s = LogSum::new(cfg.tol_for(p), cfg.max_terms);
    s.add_log_concave(
        |n| {
            let k = (n - 1) as f64;
            p * k.ln() + mf * k.ln().ln() - ln_factorial(n)
        },
        3,
        None,
        crate::special::peak_hint(p) + 1.0,
    )?;
    let series = s.finish()?.scale(-1.0);
    let b = bell_moment(p, cfg)?.log_value + 1.0;
    // ln(e B - 1) = b + ln(1 - e^{-b})
    let log_bound = -1.0 + mf * (mf / E).ln() + b + (-(-b).exp()).ln_1p();
    if series.log_value > log_bound {
        return Err(Error::Inconsistency(format!(
            "L derivative {} exceeds its bound {} at p={p}",
            series.log_value, log_bound
        )));
    }
    Ok(Derivative { series, log_bound })
}

/// `K^{(m)}(p) = (2/e) Σ_{n≥2} n^p ln^m(n) I_n(1)`, bounded by
/// `(m/e)^m K(p+1)` since `ln^m n <= (m/e)^m n`.
pub fn k_derivative(p: f64, m: u32, cfg: &SeriesConfig) -> Result<Derivative> {
    check_derivative("K_derivative", p, m)?;
    let mf = m as f64;
    let mut s = LogSum::new(cfg.tol_for(p), cfg.max_terms);
    s.add_log_concave(
        |n| {
            let x = n as f64;
            p * x.ln() + mf * x.ln().ln() + ln_bessel_in_one(n)
        },
        2,
        None,
        k_peak_hint(p) + 1.0,
    )?;
    let series = s.finish()?.scale(LN_2 - 1.0);
    let log_bound = mf * (mf / E).ln() + k_series(p + 1.0, cfg)?.log_value;
    if series.log_value > log_bound {
        return Err(Error::Inconsistency(format!(
            "K derivative {} exceeds its bound {} at p={p}",
            series.log_value, log_bound
        )));
    }
    Ok(Derivative { series, log_bound })
}

/// `K` and `L` at `p` by the most exact available route, with `S`, `G`.
pub fn evaluate_all(p: f64, cfg: &SeriesConfig) -> Result<[ConstantValue; 4]> {
    if !(p >= 2.0) {
        return domain(format!("constants need p >= 2, got {p}"));
    }
    let int_p = (p.fract() == 0.0).then_some(p as usize);
    let k = match int_p {
        Some(n) if n % 2 == 0 && n / 2 <= EXACT_M_MAX => ConstantValue {
            p,
            kind: Kind::K,
            value: Value::Exact(k_even_exact(n / 2)?),
            route: Route::Combinatorial,
        },
        _ if p > 2.0 && p <= 4.0 => ConstantValue {
            p,
            kind: Kind::K,
            value: Value::Real(k_closed_form(p)?),
            route: Route::ClosedForm,
        },
        _ => ConstantValue {
            p,
            kind: Kind::K,
            value: Value::Series(k_series(p, cfg)?),
            route: Route::Series,
        },
    };
    let l = match int_p {
        Some(n) if n % 2 == 0 && n / 2 <= EXACT_M_MAX => ConstantValue {
            p,
            kind: Kind::L,
            value: Value::Exact(l_even_exact(n / 2)?),
            route: Route::Combinatorial,
        },
        Some(n) if n % 2 == 1 && (5..=199).contains(&n) => ConstantValue {
            p,
            kind: Kind::L,
            value: Value::Real(l_odd_exact(n)?.value),
            route: Route::ClosedForm,
        },
        _ => ConstantValue {
            p,
            kind: Kind::L,
            value: Value::Series(l_series(p, cfg)?),
            route: Route::Series,
        },
    };
    let s = ConstantValue {
        p,
        kind: Kind::S,
        value: Value::Real((k.ln() / p).exp()),
        route: k.route,
    };
    let g = ConstantValue {
        p,
        kind: Kind::G,
        value: Value::Real((l.ln() / p).exp()),
        route: l.route,
    };
    Ok([k, l, s, g])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    #[test]
    fn l_series_examples() {
        assert!(l_series(2.0, &cfg()).unwrap().log_value.abs() < 1e-13);
        assert!(rel(l_series(4.0, &cfg()).unwrap().value(), 4.0) < 1e-12);
        assert!(rel(l_series(6.0, &cfg()).unwrap().value(), 41.0) < 1e-12);
        assert!(l_series(1.9, &cfg()).is_err());
    }

    #[test]
    fn g_value_examples() {
        assert!((g_value(4.0, &cfg()).unwrap() - 2f64.sqrt()).abs() < 1e-10);
        assert!((g_value(6.0, &cfg()).unwrap() - 41f64.powf(1.0 / 6.0)).abs() < 1e-12);
        assert!((g_value(6.0, &cfg()).unwrap() - 1.856_937_6).abs() < 1e-6);
        assert!((g_value(10.0, &cfg()).unwrap() - 17722f64.powf(0.1)).abs() < 1e-10);
        assert!((g_value(10.0, &cfg()).unwrap() - 2.659_814).abs() < 1e-5);
        assert!(g_value(3.0, &cfg()).is_err());
    }

    #[test]
    fn k_series_examples() {
        assert!(k_series(2.0, &cfg()).unwrap().log_value.abs() < 1e-13);
        assert!(rel(k_series(6.0, &cfg()).unwrap().value(), 31.0) < 1e-12);
        assert!(rel(k_series(10.0, &cfg()).unwrap().value(), 6556.0) < 1e-9);
    }

    #[test]
    fn s_value_examples() {
        assert_eq!(s_value(2.0, &cfg()).unwrap(), 1.0);
        assert!((s_value(4.0, &cfg()).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        // (1 + sqrt(8/π))^{1/3}, Γ(2) = 1
        let direct = (1.0 + (8.0 / PI).sqrt()).powf(1.0 / 3.0);
        assert!((s_value(3.0, &cfg()).unwrap() - direct).abs() < 1e-14);
        assert!((s_value(3.0, &cfg()).unwrap() - 1.374_322_6).abs() < 1e-6);
        assert!(s_value(1.99, &cfg()).is_err());
    }

    #[test]
    fn exact_even_values() {
        let k = [1, 4, 31, 379, 6556];
        let l = [1, 4, 41, 715, 17722];
        for m in 1..=5 {
            assert_eq!(k_even_exact(m).unwrap(), BigInt::from(k[m - 1]));
            assert_eq!(l_even_exact(m).unwrap(), BigInt::from(l[m - 1]));
            assert_eq!(k_via_polynomial(m).unwrap(), BigInt::from(k[m - 1]));
        }
        assert!(k_even_exact(0).is_err());
        assert!(l_even_exact(101).is_err());
    }

    #[test]
    fn even_moments_by_direct_enumeration() {
        // E(τ1 - τ2)^{2m} and E(θ - 1)^{2m} from truncated Poisson pmfs
        let pmf = |lam: f64, n: usize| (-lam + n as f64 * lam.ln() - ln_factorial(n as u64)).exp();
        for m in 1..=5 {
            let e = 2 * m as i32;
            let mut k = 0.0;
            for i in 0..60 {
                for j in 0..60 {
                    k += pmf(0.5, i) * pmf(0.5, j) * ((i as f64) - (j as f64)).powi(e);
                }
            }
            let l: f64 = (0..80).map(|n| pmf(1.0, n) * (n as f64 - 1.0).powi(e)).sum();
            assert!(rel(k, k_even_exact(m).unwrap().to_f64().unwrap()) < 1e-12);
            assert!(rel(l, l_even_exact(m).unwrap().to_f64().unwrap()) < 1e-12);
        }
    }

    #[test]
    fn integrality_of_dyadic_sum() {
        for m in 1..=20 {
            assert!(k_even_dyadic(m).unwrap().is_integer(), "m={m}");
        }
    }

    #[test]
    fn odd_closed_form() {
        for (p, n) in [(5, 11), (7, 162), (9, 3425)] {
            let v = l_odd_exact(p).unwrap();
            assert_eq!(v.integer_part, BigInt::from(n));
            assert!((v.value - (n as f64 + 2.0 / E)).abs() < 1e-12);
            assert!(rel(v.value, l_series(p as f64, &cfg()).unwrap().value()) < 1e-12);
        }
        assert!(l_odd_exact(6).is_err());
        assert!(l_odd_exact(3).is_err());
    }

    #[test]
    fn polynomial_route() {
        assert_eq!(k_via_polynomial(1).unwrap(), BigInt::from(1));
        assert_eq!(k_via_polynomial(3).unwrap(), BigInt::from(31));
        assert_eq!(k_via_polynomial(4).unwrap(), BigInt::from(379));
        for m in 1..=20 {
            assert_eq!(k_via_polynomial(m).unwrap(), k_even_exact(m).unwrap(), "m={m}");
        }
    }

    #[test]
    fn accelerated_route() {
        let v = k_accelerated(6.0, 1, &cfg()).unwrap();
        assert!(rel(v.value(), 31.0) < 1e-8);
        let v = k_accelerated(10.0, 2, &cfg()).unwrap();
        assert!(rel(v.value(), 6556.0) < 1e-8);
        assert_eq!(k_accelerated(10.0, 0, &cfg()).unwrap(), k_series(10.0, &cfg()).unwrap());
        // non-integer exponent against the plain series
        let a = k_accelerated(7.5, 2, &cfg()).unwrap().value();
        let b = k_series(7.5, &cfg()).unwrap().value();
        assert!(rel(a, b) < 1e-8);
        assert!(k_accelerated(6.0, 3, &cfg()).is_err());
        assert!(k_accelerated(30.0, 11, &cfg()).is_err());
    }

    #[test]
    fn derivative_examples() {
        let d = l_derivative(4.000001, 1, &cfg()).unwrap();
        assert!((d.value() - 3.86841).abs() < 1e-3);
        let d = l_derivative(6.0, 1, &cfg()).unwrap();
        let bound = (1.0 / E) * (1.0 / E) * (E * 203.0 - 1.0);
        assert!(d.value() <= bound);
        assert!(rel(d.bound(), bound) < 1e-12);
        // central difference of the series at p = 5, step 1e-5
        let h = 1e-5;
        let fd = (l_series(5.0 + h, &cfg()).unwrap().value() - l_series(5.0 - h, &cfg()).unwrap().value()) / (2.0 * h);
        let d = l_derivative(5.0, 1, &cfg()).unwrap().value();
        assert!(rel(d, fd) < 1e-6, "{d} vs {fd}");
        assert!((d - 13.773_821_887_559_28).abs() < 1e-9);
        assert!(l_derivative(5.0, 5, &cfg()).is_err());
    }

    #[test]
    fn right_derivatives_at_four() {
        let dl = l_derivative(4.0, 1, &cfg()).unwrap().value();
        let dk = k_derivative(4.0, 1, &cfg()).unwrap().value();
        assert!((dl - 3.868_412_900_876_509).abs() < 1e-10);
        assert!((dk - 3.519_338_745_203_934).abs() < 1e-10);
    }

    #[test]
    fn closed_form_derivative() {
        let h = 1e-5;
        let fd = (k_closed_form(3.0 + h).unwrap() - k_closed_form(3.0 - h).unwrap()) / (2.0 * h);
        assert!(rel(k_closed_form_derivative(3.0).unwrap(), fd) < 1e-8);
        assert!((k_closed_form_derivative(4.0).unwrap() - 2.094_455_731_807_783).abs() < 1e-10);
    }

    #[test]
    fn closed_form_meets_series_at_four() {
        let a = s_value(4.0, &cfg()).unwrap();
        let b = k_series(4.0, &cfg()).unwrap().root(4.0);
        assert!((a - b).abs() < 1e-9);
        // closed form below 4 exceeds E|τ1-τ2|^p
        let c = k_closed_form(3.0).unwrap();
        assert!((c - 2.595_769_121_605_730_7).abs() < 1e-12);
        assert!(c > k_series(3.0, &cfg()).unwrap().value());
    }

    #[test]
    fn domination_and_monotonicity() {
        let mut prev = (0.0, 0.0);
        let mut p = 4.0;
        while p <= 60.0 {
            let k = k_series(p, &cfg()).unwrap();
            let l = l_series(p, &cfg()).unwrap();
            assert!(k.log_value <= l.log_value, "p={p}");
            let s = s_value(p, &cfg()).unwrap();
            let g = g_value(p, &cfg()).unwrap();
            assert!(s > prev.0 && g > prev.1, "p={p}");
            prev = (s, g);
            p += 0.5;
        }
    }

    #[test]
    fn two_sided_growth_envelope() {
        for p in [4.0f64, 8.0, 16.0, 32.0, 64.0] {
            let s = s_value(p, &cfg()).unwrap();
            let base = p / p.ln();
            assert!(s >= base / (E * 2f64.sqrt()) && s <= 7.35 * base, "p={p}");
        }
    }

    #[test]
    fn fractional_values_against_reference() {
        // 30-digit references
        let k = [(4.5, 6.335274660027399), (7.5, 195.5714886827039), (9.0, 1516.4820674869158), (20.5, 921603044142.9685)];
        for (p, v) in k {
            assert!(rel(k_series(p, &cfg()).unwrap().value(), v) < 1e-12, "K({p})");
        }
        let l = [(4.5, 6.677115411914702), (5.5, 21.53816194732954), (20.5, 15517744808937.523)];
        for (p, v) in l {
            assert!(rel(l_series(p, &cfg()).unwrap().value(), v) < 1e-12, "L({p})");
        }
    }

    #[test]
    fn large_exponents() {
        // 30-digit references for ln L, ln K
        let l = l_series(1000.0, &cfg()).unwrap();
        assert!((l.log_value - 4432.922355911285).abs() < 1e-9);
        let k = k_series(1000.0, &cfg()).unwrap();
        assert!((k.log_value - 4313.645994475356).abs() < 1e-9);
        let l = l_series(700.0, &cfg()).unwrap();
        assert!((l.log_value - 2900.509487080683).abs() < 1e-9);
        let big = k_series(1e6, &cfg()).unwrap();
        assert!(big.rel_tail_bound <= 1e-10 && big.log_value.is_finite());
    }

    #[test]
    fn evaluate_all_routes() {
        let [k, l, s, g] = evaluate_all(6.0, &cfg()).unwrap();
        assert_eq!(k.value, Value::Exact(BigInt::from(31)));
        assert_eq!(l.route, Route::Combinatorial);
        assert!((s.as_f64() - 31f64.powf(1.0 / 6.0)).abs() < 1e-14);
        assert!((g.as_f64() - 41f64.powf(1.0 / 6.0)).abs() < 1e-14);
        let [k, l, _, _] = evaluate_all(3.0, &cfg()).unwrap();
        assert_eq!(k.route, Route::ClosedForm);
        assert_eq!(l.route, Route::Series);
        let [_, l, _, _] = evaluate_all(7.0, &cfg()).unwrap();
        assert_eq!(l.route, Route::ClosedForm);
        assert!(evaluate_all(1.5, &cfg()).is_err());
    }

    #[test]
    fn big_ln_handles_huge_integers() {
        let n = BigInt::from(10).pow(400);
        assert!((big_ln(&n) - 400.0 * 10f64.ln()).abs() < 1e-9);
    }
}
