//! Log-scale summation of positive series.
//!
//! Every series in this crate has terms `t_n = exp(l(n))` with `l` concave in
//! `n` on each summation piece (log-concave terms). On such a piece the ratio
//! `t_{n+1} / t_n` is nonincreasing, so once a ratio `r < 1` is seen the
//! remaining tail is bounded by the geometric series `t_n r / (1 - r)`. The
//! same argument runs leftward from the peak with `t_{n-1} / t_n`.
//!
//! Terms are accumulated relative to the peak term, so nothing overflows even
//! when `l(n)` is in the millions.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A positive quantity held as its natural logarithm, with a rigorous bound on
/// the relative truncation error of the series that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub log_value: f64,
    pub rel_tail_bound: f64,
    pub terms_used: usize,
}

impl SeriesValue {
    pub fn exact(value: f64) -> Self {
        SeriesValue {
            log_value: value.ln(),
            rel_tail_bound: 0.0,
            terms_used: 1,
        }
    }

    /// `exp(log_value)`; overflows to infinity for large constants.
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }

    /// `exp(log_value / p)`, the p-th root, representable for every p used here.
    pub fn root(&self, p: f64) -> f64 {
        (self.log_value / p).exp()
    }

    pub(crate) fn scale(mut self, log_factor: f64) -> Self {
        self.log_value += log_factor;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Relative tolerance; `None` selects the default for the exponent.
    pub rel_tol: Option<f64>,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            rel_tol: None,
            max_terms: 5_000_000,
        }
    }
}

impl SeriesConfig {
    pub fn with_tol(rel_tol: f64) -> Self {
        SeriesConfig {
            rel_tol: Some(rel_tol),
            ..Default::default()
        }
    }

    /// 1e-13 up to p = 1000, 1e-10 beyond (the log-scale exponent then carries
    /// a few 1e-10 of absolute rounding anyway).
    pub fn tol_for(&self, p: f64) -> f64 {
        self.rel_tol
            .unwrap_or(if p <= 1e3 { 1e-13 } else { 1e-10 })
    }
}

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Partial result over one log-concave piece: `exp(log_peak) * scaled` with an
/// absolute (peak-scaled) tail bound.
#[derive(Debug, Clone, Copy)]
struct Piece {
    log_peak: f64,
    scaled: f64,
    tail_scaled: f64,
    terms: usize,
}

/// Collects pieces and isolated terms into one [`SeriesValue`].
#[derive(Debug, Clone)]
pub struct LogSum {
    tol: f64,
    max_terms: usize,
    pieces: Vec<Piece>,
}

impl LogSum {
    pub fn new(tol: f64, max_terms: usize) -> Self {
        LogSum {
            tol,
            max_terms,
            pieces: Vec::new(),
        }
    }

    fn used(&self) -> usize {
        self.pieces.iter().map(|p| p.terms).sum()
    }

    /// A single exactly known term `exp(log_term)`.
    pub fn add_term(&mut self, log_term: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        self.pieces.push(Piece {
            log_peak: log_term,
            scaled: 1.0,
            tail_scaled: 0.0,
            terms: 1,
        });
    }

    /// Sums `exp(log_term(n))` over `lo <= n <= hi` (`hi = None` for an
    /// infinite piece). `log_term` must be concave and finite on the piece;
    /// `hint` is a guess of the peak location.
    pub fn add_log_concave<F>(&mut self, log_term: F, lo: u64, hi: Option<u64>, hint: f64) -> Result<()>
    where
        F: Fn(u64) -> f64,
    {
        if let Some(h) = hi {
            if h < lo {
                return Ok(());
            }
        }
        let budget = self.max_terms.saturating_sub(self.used());
        let peak = find_peak(&log_term, lo, hi, hint)?;
        let lp = log_term(peak);
        let mut acc = Neumaier::default();
        acc.add(1.0);
        let mut terms = 1usize;
        let side_tol = 0.5 * self.tol;

        // rightward
        let mut right_tail = 0.0;
        let mut n = peak;
        let mut ln = lp;
        loop {
            if hi == Some(n) {
                break;
            }
            let l_next = log_term(n + 1);
            let r = (l_next - ln).exp();
            let t_n = (ln - lp).exp();
            if r < 1.0 {
                let bound = match hi {
                    Some(h) => (t_n * r / (1.0 - r)).min(t_n * (h - n) as f64),
                    None => t_n * r / (1.0 - r),
                };
                if bound <= side_tol * acc.value() {
                    right_tail = bound;
                    break;
                }
            }
            if terms >= budget {
                return Err(Error::Budget {
                    tol: self.tol,
                    max_terms: self.max_terms,
                    reached: t_n * r / (1.0 - r).max(f64::MIN_POSITIVE) / acc.value(),
                });
            }
            n += 1;
            ln = l_next;
            acc.add((ln - lp).exp());
            terms += 1;
        }

        // leftward
        let mut left_tail = 0.0;
        let mut n = peak;
        let mut ln = lp;
        while n > lo {
            let l_prev = log_term(n - 1);
            let r = (l_prev - ln).exp();
            let t_n = (ln - lp).exp();
            if r < 1.0 {
                let bound = (t_n * r / (1.0 - r)).min(t_n * (n - lo) as f64);
                if bound <= side_tol * acc.value() {
                    left_tail = bound;
                    break;
                }
            }
            if terms >= budget {
                return Err(Error::Budget {
                    tol: self.tol,
                    max_terms: self.max_terms,
                    reached: t_n * (n - lo) as f64 / acc.value(),
                });
            }
            n -= 1;
            ln = l_prev;
            acc.add((ln - lp).exp());
            terms += 1;
        }

        self.pieces.push(Piece {
            log_peak: lp,
            scaled: acc.value(),
            tail_scaled: left_tail + right_tail,
            terms,
        });
        Ok(())
    }

    pub fn finish(self) -> Result<SeriesValue> {
        let top = self
            .pieces
            .iter()
            .map(|p| p.log_peak)
            .fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Err(Error::Domain("series has no positive terms".into()));
        }
        let mut total = Neumaier::default();
        let mut tail = 0.0;
        for p in &self.pieces {
            let w = (p.log_peak - top).exp();
            total.add(p.scaled * w);
            tail += p.tail_scaled * w;
        }
        let total = total.value();
        let rel = tail / total;
        if rel > self.tol {
            return Err(Error::Budget {
                tol: self.tol,
                max_terms: self.max_terms,
                reached: rel,
            });
        }
        Ok(SeriesValue {
            log_value: top + total.ln(),
            rel_tail_bound: rel,
            terms_used: self.used(),
        })
    }
}

/// Location of the maximum of a concave sequence on `[lo, hi]`.
fn find_peak<F: Fn(u64) -> f64>(f: &F, lo: u64, hi: Option<u64>, hint: f64) -> Result<u64> {
    // rises(n) is true while f(n+1) >= f(n); concavity makes it monotone.
    let rises = |n: u64| f(n + 1) >= f(n);
    let mut a = lo;
    let mut b = match hi {
        Some(h) => h,
        None => {
            let mut u = if hint.is_finite() && hint > lo as f64 {
                hint as u64
            } else {
                lo
            };
            u = u.max(lo) + 1;
            while rises(u) {
                let step = (u - lo).max(1);
                u = u.checked_add(step).ok_or_else(|| {
                    Error::Domain("series terms increase without bound".into())
                })?;
                if u > (1u64 << 52) {
                    return Err(Error::Domain("series terms increase without bound".into()));
                }
            }
            u
        }
    };
    // invariant: the peak lies in [a, b]
    while a < b {
        let mid = a + (b - a) / 2;
        if rises(mid) {
            a = mid + 1;
        } else {
            b = mid;
        }
    }
    Ok(a)
}
