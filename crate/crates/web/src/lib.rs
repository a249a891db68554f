//! Browser bindings: point evaluation, ratio curves against `p/(e log p)` and
//! `h(p)`, and the Poisson-moment series weights that locate the saddle point.
//!
//! The `*_values` functions hold the logic and are plain Rust; the exported
//! wrappers only convert errors.

use rosenthal_core::asymptotics::{solve_m, solve_n};
use rosenthal_core::constants::evaluate_all;
use rosenthal_core::extrema::Ratio;
use rosenthal_core::report::format_value;
use rosenthal_core::special::{ln_bessel_in_one, ln_factorial};
use rosenthal_core::SeriesConfig;
use wasm_bindgen::prelude::*;

pub const MAX_CURVE_POINTS: usize = 4000;
const MAX_WEIGHTS: usize = 20_000;

#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    k: String,
    l: String,
    k_route: String,
    l_route: String,
    s: f64,
    g: f64,
    rel_error: f64,
}

#[wasm_bindgen]
impl Evaluation {
    #[wasm_bindgen(getter)]
    pub fn k(&self) -> String {
        self.k.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn l(&self) -> String {
        self.l.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn k_route(&self) -> String {
        self.k_route.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn l_route(&self) -> String {
        self.l_route.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn s(&self) -> f64 {
        self.s
    }
    #[wasm_bindgen(getter)]
    pub fn g(&self) -> f64 {
        self.g
    }
    /// Larger of the K and L relative error bounds.
    #[wasm_bindgen(getter)]
    pub fn rel_error(&self) -> f64 {
        self.rel_error
    }
}

pub fn evaluation(p: f64) -> Result<Evaluation, String> {
    let [k, l, s, g] = evaluate_all(p, &SeriesConfig::default()).map_err(|e| e.to_string())?;
    Ok(Evaluation {
        k: format_value(&k),
        l: format_value(&l),
        k_route: k.route.as_str().to_string(),
        l_route: l.route.as_str().to_string(),
        s: s.as_f64(),
        g: g.as_f64(),
        rel_error: k.rel_error().max(l.rel_error()),
    })
}

pub fn parse_ratio(name: &str) -> Result<Ratio, String> {
    match name {
        "G/g" => Ok(Ratio::GOverG),
        "G/h" => Ok(Ratio::GOverH),
        "S/g" => Ok(Ratio::SOverG),
        "S/h" => Ok(Ratio::SOverH),
        _ => Err(format!("unknown ratio {name:?}; use G/g, G/h, S/g or S/h")),
    }
}

/// `[p0, r0, p1, r1, ...]` on `points` log-spaced exponents in `[p_min, p_max]`.
pub fn ratio_curve_values(ratio: &str, p_min: f64, p_max: f64, points: usize) -> Result<Vec<f64>, String> {
    let r = parse_ratio(ratio)?;
    let floor = if matches!(r, Ratio::GOverH | Ratio::SOverH) { 15.0 } else { 4.0 };
    if !(p_min >= floor && p_max > p_min && p_max <= 1e6) {
        return Err(format!("{ratio} needs {floor} <= p_min < p_max <= 1e6"));
    }
    if !(2..=MAX_CURVE_POINTS).contains(&points) {
        return Err(format!("points must be in 2..={MAX_CURVE_POINTS}"));
    }
    let cfg = SeriesConfig::default();
    let (a, b) = (p_min.ln(), p_max.ln());
    let mut out = Vec::with_capacity(2 * points);
    for i in 0..points {
        let p = if i + 1 == points {
            p_max
        } else {
            (a + (b - a) * i as f64 / (points - 1) as f64).exp()
        };
        out.push(p);
        out.push(r.eval(p, &cfg).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// Normalized series terms over `n = 0, 1, ...`: `P(θ = n)|n - 1|^p / L(p)`
/// for `"L"`, `P(|τ1 - τ2| = n) n^p / K(p)` for `"K"`. Stops once past twice
/// the saddle point and 40 nats below the largest term.
pub fn series_weight_values(kind: &str, p: f64) -> Result<Vec<f64>, String> {
    if !(2.0..=2000.0).contains(&p) {
        return Err(format!("series weights need 2 <= p <= 2000, got {p}"));
    }
    let peak = saddle_point_value(kind, p)?;
    let log_term = |n: usize| -> f64 {
        let x = n as f64;
        match (kind, n) {
            ("L", 1) | ("K", 0) => f64::NEG_INFINITY,
            ("L", _) => p * (x - 1.0).abs().ln() - ln_factorial(n as u64) - 1.0,
            _ => p * x.ln() + ln_bessel_in_one(n as u64) + std::f64::consts::LN_2 - 1.0,
        }
    };
    let mut logs = Vec::new();
    let mut top = f64::NEG_INFINITY;
    for n in 0..MAX_WEIGHTS {
        let v = log_term(n);
        top = top.max(v);
        if n as f64 > 2.0 * peak + 2.0 && v < top - 40.0 {
            break;
        }
        logs.push(v);
    }
    let w: Vec<f64> = logs.iter().map(|v| (v - top).exp()).collect();
    let total: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / total).collect())
}

/// `M(p)` with `M log M = p` for `"L"`, `N(p)` with `N log 2N = p` for `"K"`.
pub fn saddle_point_value(kind: &str, p: f64) -> Result<f64, String> {
    match kind {
        "L" => solve_m(p).map_err(|e| e.to_string()),
        "K" => solve_n(p).map_err(|e| e.to_string()),
        _ => Err(format!("unknown series {kind:?}; use L or K")),
    }
}

/// K, L, S, G at `p >= 2`.
#[wasm_bindgen]
pub fn evaluate(p: f64) -> Result<Evaluation, JsError> {
    evaluation(p).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ratio_curve(ratio: &str, p_min: f64, p_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    ratio_curve_values(ratio, p_min, p_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn series_weights(kind: &str, p: f64) -> Result<Vec<f64>, JsError> {
    series_weight_values(kind, p).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn saddle_point(kind: &str, p: f64) -> Result<f64, JsError> {
    saddle_point_value(kind, p).map_err(|e| JsError::new(&e))
}
