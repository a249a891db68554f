//! Saddle-point asymptotics: the roots `M(p)`, `N(p)`, the exponents
//! `X(p)`, `Y(p)`, their envelopes and the explicit upper and lower brackets
//! for `L(p)` and `K(p)`.

use crate::constants::{k_series, l_series};
use crate::series::SeriesConfig;
use crate::{domain, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, LN_2, PI};

/// Envelope reference point for `L`.
pub const P0: f64 = 700.0;
/// Envelope reference point for `K`.
pub const P1: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Factors {
    pub g: f64,
    pub h: f64,
    pub delta: f64,
    pub big_delta: f64,
}

/// `g = p/(e ln p)`, `δ = 1/ln p`, `Δ = ln ln p / ln p`, `h = g (1 + Δ + Δ²)`.
pub fn elementary_factors(p: f64) -> Result<Factors> {
    if !(p > E) {
        return domain(format!("elementary factors need p > e, got {p}"));
    }
    let lp = p.ln();
    let g = p / (E * lp);
    let big_delta = lp.ln() / lp;
    Ok(Factors {
        g,
        h: g * (1.0 + big_delta + big_delta * big_delta),
        delta: 1.0 / lp,
        big_delta,
    })
}

fn big_delta(p: f64) -> f64 {
    let lp = p.ln();
    lp.ln() / lp
}

/// Root `x >= 1` of `x ln(c x) = p` for `c >= 1`, by Newton's method with a
/// bisection safeguard. `x ln(cx)` is convex and increasing there.
fn solve_x_log(p: f64, c: f64) -> f64 {
    let f = |x: f64| x * (c * x).ln() - p;
    let mut lo = 1.0 / c;
    let mut hi = (p + 1.0).max(2.0);
    let mut x = if p > E { (p / (c * p).ln()).max(lo) } else { 0.5 * (lo + hi) };
    for _ in 0..200 {
        let fx = f(x);
        if fx.abs() <= 1e-15 * p {
            break;
        }
        if fx > 0.0 {
            hi = hi.min(x);
        } else {
            lo = lo.max(x);
        }
        let step = fx / ((c * x).ln() + 1.0);
        let mut next = x - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x {
            x = next;
            break;
        }
        x = next;
    }
    x
}

/// `M(p)`: the root of `x ln x = p`.
pub fn solve_m(p: f64) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return domain(format!("solve_M needs p > 0, got {p}"));
    }
    Ok(solve_x_log(p, 1.0))
}

/// `N(p)`: the root of `x ln(2x) = p`; equals `M(2p)/2`.
pub fn solve_n(p: f64) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return domain(format!("solve_N needs p > 0, got {p}"));
    }
    Ok(solve_x_log(p, 2.0))
}

/// `V(x, p) = p ln x - x ln x + x`.
pub fn v(x: f64, p: f64) -> f64 {
    p * x.ln() - x * x.ln() + x
}

/// `W(x, p) = p ln x - x ln x + x (1 - ln 2)`.
pub fn w(x: f64, p: f64) -> f64 {
    p * x.ln() - x * x.ln() + x * (1.0 - LN_2)
}

/// `(X, Y) = (V(M, p)/p, W(N, p)/p)`.
pub fn saddle_exponents(p: f64) -> Result<(f64, f64)> {
    if !(p >= E) {
        return domain(format!("saddle exponents need p >= e, got {p}"));
    }
    let m = solve_m(p)?;
    let n = solve_n(p)?;
    let x = v(m, p) / p;
    let y = w(n, p) / p;
    for t in [0.5, 2.0] {
        if v(t * m, p) / p > x || w(t * n, p) / p > y {
            return Err(Error::Inconsistency(format!("saddle point not a maximum at p={p}")));
        }
    }
    Ok((x, y))
}

/// `C14 = 1/(1 - Δ(P0))`.
pub fn c14() -> f64 {
    1.0 / (1.0 - big_delta(P0))
}

/// `C15 = 2/(sqrt(1 + 4Δ²(P0)) + 1)`.
pub fn c15() -> f64 {
    let d = big_delta(P0);
    2.0 / ((1.0 + 4.0 * d * d).sqrt() + 1.0)
}

/// `ε₊(p) = Δ + C14 Δ²`.
pub fn eps_plus(p: f64) -> f64 {
    let d = big_delta(p);
    d + c14() * d * d
}

/// `ε₋(p) = Δ + C15 Δ² - δΔ`.
pub fn eps_minus(p: f64) -> f64 {
    let d = big_delta(p);
    d + c15() * d * d - d / p.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelopes {
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub m_plus: f64,
    pub m_minus: f64,
    pub n_plus: f64,
    pub n_minus: f64,
}

fn envelope_values(p: f64) -> Envelopes {
    let lp = p.ln();
    let l2p = (2.0 * p).ln();
    Envelopes {
        eps_plus: eps_plus(p),
        eps_minus: eps_minus(p),
        m_plus: p / lp * (1.0 + eps_plus(p)),
        m_minus: p / lp * (1.0 + eps_minus(p)),
        n_plus: p / l2p * (1.0 + eps_plus(2.0 * p)),
        n_minus: p / l2p * (1.0 + eps_minus(2.0 * p)),
    }
}

/// `M₋ <= M <= M₊` and `N₋ <= N <= N₊`, checked.
pub fn epsilon_envelopes(p: f64) -> Result<Envelopes> {
    if !(p >= P0) {
        return domain(format!("envelopes need p >= 700, got {p}"));
    }
    let e = envelope_values(p);
    let m = solve_m(p)?;
    let n = solve_n(p)?;
    if !(e.m_minus <= m && m <= e.m_plus && e.n_minus <= n && n <= e.n_plus) {
        return Err(Error::Inconsistency(format!(
            "envelope violated at p={p}: M={m} in [{}, {}], N={n} in [{}, {}]",
            e.m_minus, e.m_plus, e.n_minus, e.n_plus
        )));
    }
    Ok(e)
}

/// Upper envelope of `X(p) - ln g(p)`.
pub fn x1(p: f64) -> f64 {
    let d = big_delta(p);
    let s = 1.0 / p.ln();
    let e = eps_plus(p);
    d + s + d * e + s * (e - e.ln_1p())
}

/// Lower envelope of `X(p) - ln g(p)`.
pub fn x2(p: f64) -> f64 {
    let d = big_delta(p);
    let s = 1.0 / p.ln();
    let e = eps_minus(p);
    d + s + (e.ln_1p() - e) - s * e * e.ln_1p()
}

/// Upper envelope of `Y(p) - ln g(p)`.
pub fn y1(p: f64) -> f64 {
    let d2 = big_delta(2.0 * p);
    let s2 = 1.0 / (2.0 * p).ln();
    let s = 1.0 / p.ln();
    let e2 = eps_plus(2.0 * p);
    d2 + s2 + (1.0 + e2) * s * LN_2 / (1.0 + s * LN_2) + e2 * (d2 + s2)
}

/// Lower envelope of `Y(p) - ln g(p)`.
pub fn y2(p: f64) -> f64 {
    let d2 = big_delta(2.0 * p);
    let s2 = 1.0 / (2.0 * p).ln();
    d2 + s2 + eps_minus(2.0 * p) * (d2 + s2)
}

/// A log-scale bracket `lower <= ln F(p) <= upper` with the p-th-root factors
/// relative to the saddle exponent: `upper = p (E + ln psi_upper)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub log_lower: f64,
    pub log_upper: f64,
    pub psi_lower: f64,
    pub psi_upper: f64,
}

/// Explicit bracket for `ln L(p)`, no check against the series.
pub fn l_bracket(p: f64) -> Result<Bracket> {
    if !(p > 16.0) {
        return domain(format!("L bracket needs p > 16, got {p}"));
    }
    let (x, _) = saddle_exponents(p)?;
    let lp = p.ln();
    let ep = 1.0 + eps_plus(p);
    let psi1 = (2.0 * PI * p).sqrt() * ep / lp;
    let psi2 = (-(lp * lp) / (ep * ep)).exp() * p * ep * ep / (lp * lp);
    let inv_sqrt = (2.0 * PI).powf(-0.5);
    let bracket = 1.5 * (-p * x).exp() + inv_sqrt + psi1 + 2.0 * inv_sqrt * psi2;
    let log_upper = p * x + bracket.ln() - 1.0;

    let q = p - 0.5;
    let (xq, _) = saddle_exponents(q)?;
    let mq = solve_m(q)?;
    let m_minus = q / q.ln() * (1.0 + eps_minus(q));
    let gauss = (-(q * q) / (m_minus * m_minus)).exp();
    let log_lower = -1.0 + (0.5 * (-1.0f64 / 12.0).exp() * m_minus / q.sqrt()).ln() + q * xq + (-gauss).ln_1p()
        - (mq + q.sqrt() + 1.0).ln();
    Ok(Bracket {
        log_lower,
        log_upper,
        psi_lower: ((log_lower - p * x) / p).exp(),
        psi_upper: ((log_upper - p * x) / p).exp(),
    })
}

/// Bracket for `ln L(p)`, `p >= 700`, checked against the series.
pub fn l_bounds(p: f64, cfg: &SeriesConfig) -> Result<Bracket> {
    if !(p >= P0) {
        return domain(format!("L bounds need p >= 700, got {p}"));
    }
    let b = l_bracket(p)?;
    let l = l_series(p, cfg)?.log_value;
    if !(b.log_lower <= l && l <= b.log_upper) {
        return Err(Error::Inconsistency(format!(
            "L sandwich violated at p={p}: {} <= {l} <= {}",
            b.log_lower, b.log_upper
        )));
    }
    Ok(b)
}

/// Explicit bracket for `ln K(p)`, no check against the series.
pub fn k_bracket(p: f64) -> Result<Bracket> {
    if !(p > 16.0) {
        return domain(format!("K bracket needs p > 16, got {p}"));
    }
    let (_, y) = saddle_exponents(p)?;
    let lp = p.ln();
    let ep = 1.0 + eps_plus(2.0 * p);
    let inv_sqrt = (2.0 * PI).powf(-0.5);
    let middle = p.sqrt() * ep / (2.0 * p).ln();
    let tail = 2.0 * inv_sqrt * p / (lp * lp) * ep * ep * (-0.5 * lp * lp / (ep * ep)).exp();
    let bracket = 0.5 * (-p * y).exp() + inv_sqrt + middle + tail;
    let log_upper = LN_2 - 0.75 + p * y + bracket.ln();

    let q = p - 0.5;
    let (_, yq) = saddle_exponents(q)?;
    let n_minus = q / (2.0 * q).ln() * (1.0 + eps_minus(2.0 * q));
    let gauss = (-(q * q) / (n_minus * n_minus)).exp();
    let log_lower = LN_2 - 1.0 - 1.0 / 12.0 - 0.5 * (2.0 * PI).ln()
        + q * yq
        + ((PI / 2.0).sqrt() * n_minus / q.sqrt()).ln()
        + (-gauss).ln_1p();
    Ok(Bracket {
        log_lower,
        log_upper,
        psi_lower: ((log_lower - p * y) / p).exp(),
        psi_upper: ((log_upper - p * y) / p).exp(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    /// `p >= 1e6`, sandwich asserted.
    Strict,
    /// `p >= 1e3`, sandwich reported only.
    Diagnostic,
}

/// Bracket for `ln K(p)` with its verdict against the series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KBounds {
    pub bracket: Bracket,
    pub log_k: f64,
    pub holds: bool,
}

pub fn k_bounds(p: f64, mode: BoundMode, cfg: &SeriesConfig) -> Result<KBounds> {
    let min = match mode {
        BoundMode::Strict => P1,
        BoundMode::Diagnostic => 1e3,
    };
    if !(p >= min) {
        return domain(format!("K bounds in {mode:?} mode need p >= {min}, got {p}"));
    }
    let bracket = k_bracket(p)?;
    let log_k = k_series(p, cfg)?.log_value;
    let holds = bracket.log_lower <= log_k && log_k <= bracket.log_upper;
    if mode == BoundMode::Strict && !holds {
        return Err(Error::Inconsistency(format!(
            "K sandwich violated at p={p}: {} <= {log_k} <= {}",
            bracket.log_lower, bracket.log_upper
        )));
    }
    Ok(KBounds { bracket, log_k, holds })
}

fn check16(name: &str, p: f64) -> Result<Factors> {
    if !(p >= 16.0) {
        return domain(format!("{name} needs p >= 16, got {p}"));
    }
    elementary_factors(p)
}

/// `g (1 + Δ + δ + Δ² + Δδ)`, the `o(1)` remainder dropped.
pub fn expansion_g(p: f64) -> Result<f64> {
    let f = check16("expansion_G", p)?;
    let (d, s) = (f.big_delta, f.delta);
    Ok(f.g * (1.0 + d + s + d * d + d * s))
}

/// `g (1 + Δ + (1 - ln 2) δ + Δ²)`, the `o(1)` remainder dropped.
pub fn expansion_s(p: f64) -> Result<f64> {
    let f = check16("expansion_S", p)?;
    let (d, s) = (f.big_delta, f.delta);
    Ok(f.g * (1.0 + d + (1.0 - LN_2) * s + d * d))
}

/// `M^{1 - M/p} exp(M/p)`.
pub fn g_form(p: f64) -> Result<f64> {
    let m = solve_m(p)?;
    Ok(((1.0 - m / p) * m.ln() + m / p).exp())
}

/// `N (e/(2N))^{N/p}`.
pub fn s_form(p: f64) -> Result<f64> {
    let n = solve_n(p)?;
    Ok(n * ((n / p) * (1.0 - (2.0 * n).ln())).exp())
}

pub fn theorem3_forms(p: f64) -> Result<(f64, f64)> {
    check16("theorem3_forms", p)?;
    Ok((g_form(p)?, s_form(p)?))
}

/// Everything asymptotic at one `p`. Envelope fields are evaluated for any
/// `p > 16`; `l_asserted`/`k_asserted` say whether `p` is past the point
/// where the brackets are claimed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticBundle {
    pub p: f64,
    pub g: f64,
    pub h: f64,
    pub delta: f64,
    pub big_delta: f64,
    pub m: f64,
    pub n: f64,
    pub x: f64,
    pub y: f64,
    pub eps: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub m_plus: f64,
    pub m_minus: f64,
    pub n_plus: f64,
    pub n_minus: f64,
    pub l_lower: f64,
    pub l_upper: f64,
    pub k_lower: f64,
    pub k_upper: f64,
    pub log_l: f64,
    pub log_k: f64,
    pub l_asserted: bool,
    pub k_asserted: bool,
    pub l_holds: bool,
    pub k_holds: bool,
}

impl AsymptoticBundle {
    pub fn compute(p: f64, cfg: &SeriesConfig) -> Result<Self> {
        let f = elementary_factors(p)?;
        let (x, y) = saddle_exponents(p)?;
        let m = solve_m(p)?;
        let n = solve_n(p)?;
        let env = envelope_values(p);
        let lb = l_bracket(p)?;
        let kb = k_bracket(p)?;
        let log_l = l_series(p, cfg)?.log_value;
        let log_k = k_series(p, cfg)?.log_value;
        Ok(AsymptoticBundle {
            p,
            g: f.g,
            h: f.h,
            delta: f.delta,
            big_delta: f.big_delta,
            m,
            n,
            x,
            y,
            eps: m * p.ln() / p - 1.0,
            eps_plus: env.eps_plus,
            eps_minus: env.eps_minus,
            m_plus: env.m_plus,
            m_minus: env.m_minus,
            n_plus: env.n_plus,
            n_minus: env.n_minus,
            l_lower: lb.log_lower,
            l_upper: lb.log_upper,
            k_lower: kb.log_lower,
            k_upper: kb.log_upper,
            log_l,
            log_k,
            l_asserted: p >= P0,
            k_asserted: p >= P1,
            l_holds: lb.log_lower <= log_l && log_l <= lb.log_upper,
            k_holds: kb.log_lower <= log_k && log_k <= kb.log_upper,
        })
    }
}
