use super::ln_factorial;
use crate::series::{LogSum, SeriesConfig, SeriesValue};
use crate::{domain, Result};

const P_MAX: f64 = 1e6;

/// Rough location of the peak of `n^p / n!`, i.e. the root of `x ln x = p`.
pub(crate) fn peak_hint(p: f64) -> f64 {
    if p <= std::f64::consts::E {
        1.0
    } else {
        let mut x = p / p.ln();
        for _ in 0..4 {
            x = p / x.ln().max(1.0);
        }
        x
    }
}

/// `B(p) = e^{-1} Σ_{n≥1} n^p / n!`, the p-th moment of a Poisson(1)
/// variable (Bell numbers at integer `p`).
pub fn bell_moment(p: f64, cfg: &SeriesConfig) -> Result<SeriesValue> {
    if !(p > 0.0 && p <= P_MAX) {
        return domain(format!("bell_moment needs 0 < p <= 1e6, got {p}"));
    }
    let mut s = LogSum::new(cfg.tol_for(p), cfg.max_terms);
    s.add_log_concave(
        |n| p * (n as f64).ln() - ln_factorial(n),
        1,
        None,
        peak_hint(p),
    )?;
    Ok(s.finish()?.scale(-1.0))
}

/// `B(a, p, z) = Σ_{n≥0} |n - a|^p z^n / (e n!)` with `0^0 = 1`.
pub fn generalized_bell(a: f64, p: f64, z: f64, cfg: &SeriesConfig) -> Result<SeriesValue> {
    if !(0.0..=P_MAX).contains(&p) {
        return domain(format!("generalized_bell needs 0 <= p <= 1e6, got {p}"));
    }
    if !(z > 0.0 && z <= 1.0) {
        return domain(format!("generalized_bell needs z in (0, 1], got {z}"));
    }
    if !a.is_finite() || a > 1e9 {
        return domain(format!("generalized_bell needs a finite shift, got {a}"));
    }
    let ln_z = z.ln();
    let term = |n: u64| {
        let d = (n as f64 - a).abs();
        let pow = if p == 0.0 { 0.0 } else { p * d.ln() };
        pow + n as f64 * ln_z - ln_factorial(n)
    };
    let mut s = LogSum::new(cfg.tol_for(p), cfg.max_terms);
    if a < 0.0 {
        s.add_log_concave(term, 0, None, peak_hint(p) + a.abs())?;
    } else {
        let fl = a.floor() as u64;
        let hit = a.fract() == 0.0;
        // n < a
        let left_hi = if hit { fl.checked_sub(1) } else { Some(fl) };
        if let Some(h) = left_hi {
            s.add_log_concave(term, 0, Some(h), 0.0)?;
        }
        if hit && p == 0.0 {
            s.add_term(fl as f64 * ln_z - ln_factorial(fl));
        }
        // n > a
        s.add_log_concave(term, fl + 1, None, a + peak_hint(p))?;
    }
    Ok(s.finish()?.scale(-1.0))
}
