//! Monte-Carlo estimates of the Poisson moments and of Rosenthal ratios.
//!
//! Samples are drawn in fixed blocks of [`BLOCK`] draws; block `i` uses the
//! ChaCha8 stream `i` of the master seed. Per-block statistics are merged in
//! block order, so estimates are bit-identical for any thread count.

use crate::constants::g_value;
use crate::parallel::{default_threads, par_map};
use crate::series::SeriesConfig;
use crate::special::generalized_bell;
use crate::{domain, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub const GENERATOR: &str = "ChaCha8 (rand_chacha 0.3), stream = block index";
pub const BLOCK: u64 = 1 << 16;
const MIN_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub generator: String,
}

/// Poisson draw: sequential-search inversion for `λ <= 30`, Hörmann's PTRS
/// transformed rejection above.
pub fn sample_poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    debug_assert!(lambda > 0.0 && lambda <= 1e3);
    if lambda <= 30.0 {
        let mut k = 0u64;
        let mut p = (-lambda).exp();
        let mut cdf = p;
        let u: f64 = rng.gen();
        while u > cdf {
            k += 1;
            p *= lambda / k as f64;
            cdf += p;
            if p == 0.0 {
                break;
            }
        }
        k
    } else {
        ptrs(lambda, rng)
    }
}

fn ptrs<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    let slam = lambda.sqrt();
    let loglam = lambda.ln();
    let b = 0.931 + 2.53 * slam;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let vr = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u: f64 = rng.gen::<f64>() - 0.5;
        let v: f64 = rng.gen();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + lambda + 0.43).floor();
        if us >= 0.07 && v <= vr {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = (v * inv_alpha / (a / (us * us) + b)).ln();
        let rhs = -lambda + k * loglam - libm::lgamma(k + 1.0);
        if lhs <= rhs {
            return k as u64;
        }
    }
}

/// Count, mean and sum of squared deviations of one block.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }
}

/// Runs `draw` `n` times over reproducible blocks and returns mean and stderr.
fn run_blocks<F>(n: u64, seed: u64, threads: usize, draw: F) -> (f64, f64)
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let blocks: Vec<u64> = (0..n.div_ceil(BLOCK)).collect();
    let parts = par_map(&blocks, threads, |&i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let len = BLOCK.min(n - i * BLOCK);
        let mut m = Moments::default();
        for _ in 0..len {
            m.push(draw(&mut rng));
        }
        m
    });
    let m = parts.into_iter().fold(Moments::default(), Moments::merge);
    let var = if m.n > 1.0 { m.m2 / (m.n - 1.0) } else { 0.0 };
    (m.mean, (var / m.n).sqrt())
}

fn check_moment_args(p: f64, n: u64) -> Result<()> {
    if !(2.0..=12.0).contains(&p) {
        return domain(format!("Monte-Carlo moments need 2 <= p <= 12, got {p}"));
    }
    if n < MIN_SAMPLES {
        return domain(format!("Monte-Carlo needs at least {MIN_SAMPLES} samples, got {n}"));
    }
    Ok(())
}

fn estimate(mean: f64, stderr: f64, n: u64, seed: u64) -> McEstimate {
    McEstimate {
        mean,
        stderr,
        n_samples: n,
        seed,
        generator: GENERATOR.to_string(),
    }
}

/// `E|θ - 1|^p`, `θ ~ Poisson(1)`.
pub fn mc_l(p: f64, n: u64, seed: u64) -> Result<McEstimate> {
    mc_l_threads(p, n, seed, default_threads())
}

pub fn mc_l_threads(p: f64, n: u64, seed: u64, threads: usize) -> Result<McEstimate> {
    check_moment_args(p, n)?;
    let (m, s) = run_blocks(n, seed, threads, |rng| (sample_poisson(1.0, rng) as f64 - 1.0).abs().powf(p));
    Ok(estimate(m, s, n, seed))
}

/// `E|τ1 - τ2|^p`, `τ1, τ2 ~ Poisson(1/2)` independent.
pub fn mc_k(p: f64, n: u64, seed: u64) -> Result<McEstimate> {
    mc_k_threads(p, n, seed, default_threads())
}

pub fn mc_k_threads(p: f64, n: u64, seed: u64, threads: usize) -> Result<McEstimate> {
    check_moment_args(p, n)?;
    let (m, s) = run_blocks(n, seed, threads, |rng| {
        let d = sample_poisson(0.5, rng) as f64 - sample_poisson(0.5, rng) as f64;
        d.abs().powf(p)
    });
    Ok(estimate(m, s, n, seed))
}

/// Sample mean of `τ1 - τ2`, for the symmetry check.
pub fn mc_k_difference_mean(n: u64, seed: u64) -> Result<McEstimate> {
    check_moment_args(2.0, n)?;
    let (m, s) = run_blocks(n, seed, default_threads(), |rng| {
        sample_poisson(0.5, rng) as f64 - sample_poisson(0.5, rng) as f64
    });
    Ok(estimate(m, s, n, seed))
}

/// Summand distributions for the Rosenthal ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `Poisson(λ) - λ`, `0 < λ <= 1`.
    CenteredPoisson { lambda: f64 },
    /// `±1` with probability 1/2 each.
    Rademacher,
    /// `a` with probability `q`, `-a q/(1-q)` otherwise; symmetric at `q = 1/2`.
    TwoPoint { a: f64, q: f64 },
}

impl Family {
    /// Parses `centered-poisson(λ)`, `rademacher`, `two-point(a,q)`.
    pub fn parse(s: &str) -> Result<Family> {
        let s = s.trim();
        let args = |name: &str| -> Option<Vec<f64>> {
            let inner = s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
            inner.split(',').map(|t| t.trim().parse().ok()).collect()
        };
        if s == "rademacher" {
            return Ok(Family::Rademacher);
        }
        if let Some(v) = args("centered-poisson") {
            if let [lambda] = v[..] {
                return Ok(Family::CenteredPoisson { lambda });
            }
        }
        if let Some(v) = args("two-point") {
            if let [a, q] = v[..] {
                return Ok(Family::TwoPoint { a, q });
            }
        }
        domain(format!("unknown family {s:?}"))
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Family::CenteredPoisson { lambda } if !(lambda > 0.0 && lambda <= 1.0) => {
                domain(format!("centered-poisson needs 0 < λ <= 1, got {lambda}"))
            }
            Family::TwoPoint { a, q } if !(a > 0.0 && q > 0.0 && q < 1.0) => {
                domain(format!("two-point needs a > 0 and 0 < q < 1, got ({a}, {q})"))
            }
            _ => Ok(()),
        }
    }

    /// `(Var ξ, E|ξ|^p)` exactly.
    fn moments(&self, p: f64, cfg: &SeriesConfig) -> Result<(f64, f64)> {
        Ok(match *self {
            Family::CenteredPoisson { lambda } => {
                // E|θ - λ|^p = e^{1-λ} B(λ, p, λ)
                let b = generalized_bell(lambda, p, lambda, cfg)?;
                (lambda, (1.0 - lambda + b.log_value).exp())
            }
            Family::Rademacher => (1.0, 1.0),
            Family::TwoPoint { a, q } => {
                let b = a * q / (1.0 - q);
                (q * a * a + (1.0 - q) * b * b, q * a.powf(p) + (1.0 - q) * b.powf(p))
            }
        })
    }

    /// One draw of the sum of `n` independent copies.
    fn draw_sum(&self, n: u64, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            Family::CenteredPoisson { lambda } => {
                let mu = n as f64 * lambda;
                sample_poisson(mu, rng) as f64 - mu
            }
            Family::Rademacher => {
                let k = Binomial::new(n, 0.5).expect("valid").sample(rng);
                2.0 * k as f64 - n as f64
            }
            Family::TwoPoint { a, q } => {
                let k = Binomial::new(n, q).expect("valid").sample(rng) as f64;
                k * a - (n as f64 - k) * a * q / (1.0 - q)
            }
        }
    }
}

/// `||Σ ξ_i||_p / max(||Σ ξ_i||_2, (Σ ||ξ_i||_p^p)^{1/p})` with the numerator
/// estimated and the denominator exact; stderr by the delta method. All
/// families are centered, so for `p >= 4` the estimate is checked against
/// `G(p) (1 + 5 stderr/mean)`.
pub fn mc_rosenthal_ratio(family: Family, n_terms: u64, p: f64, n: u64, seed: u64) -> Result<McEstimate> {
    family.validate()?;
    check_moment_args(p, n)?;
    if !(1..=10_000).contains(&n_terms) {
        return domain(format!("n_terms must be in 1..=10000, got {n_terms}"));
    }
    let cfg = SeriesConfig::default();
    if let Family::CenteredPoisson { lambda } = family {
        if n_terms as f64 * lambda > 1e3 {
            return domain("centered-poisson sum mean exceeds 1e3");
        }
    }
    let (var, abs_p) = family.moments(p, &cfg)?;
    let nf = n_terms as f64;
    let den = (nf * var).sqrt().max((nf * abs_p).powf(1.0 / p));
    let (m, s) = run_blocks(n, seed, default_threads(), |rng| family.draw_sum(n_terms, rng).abs().powf(p));
    let ratio = m.powf(1.0 / p) / den;
    let stderr = if m > 0.0 { ratio * (s / m) / p } else { 0.0 };
    if p >= 4.0 {
        let g = g_value(p, &cfg)?;
        if ratio > g * (1.0 + 5.0 * stderr / ratio.max(f64::MIN_POSITIVE)) {
            return Err(Error::Inconsistency(format!(
                "Rosenthal ratio {ratio} exceeds G({p}) = {g} beyond 5 stderr"
            )));
        }
    }
    Ok(estimate(ratio, stderr, n, seed))
}

/// Chi-square goodness of fit of Poisson draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonFit {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Draws `n` Poisson(`lambda`) variates and tests them on the cells
/// `0..=max_cell`, the last cell absorbing the upper tail; trailing cells with
/// expected count below 5 are merged into their left neighbour.
pub fn poisson_chi_square(lambda: f64, n: u64, max_cell: usize, seed: u64) -> Result<PoissonFit> {
    if !(lambda > 0.0 && lambda <= 1e3) || max_cell == 0 {
        return domain("poisson_chi_square needs 0 < λ <= 1e3 and max_cell >= 1");
    }
    let blocks: Vec<u64> = (0..n.div_ceil(BLOCK)).collect();
    let counts = par_map(&blocks, default_threads(), |&i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let mut c = vec![0u64; max_cell + 1];
        for _ in 0..BLOCK.min(n - i * BLOCK) {
            let k = sample_poisson(lambda, &mut rng) as usize;
            c[k.min(max_cell)] += 1;
        }
        c
    });
    let mut observed = vec![0u64; max_cell + 1];
    for c in counts {
        for (o, x) in observed.iter_mut().zip(c) {
            *o += x;
        }
    }
    let mut probs: Vec<f64> = (0..max_cell)
        .map(|k| (-lambda + k as f64 * lambda.ln() - libm::lgamma(k as f64 + 1.0)).exp())
        .collect();
    probs.push((1.0 - probs.iter().sum::<f64>()).max(0.0));
    let mut obs: Vec<f64> = observed.iter().map(|&x| x as f64).collect();
    while probs.len() > 2 && probs[probs.len() - 1] * (n as f64) < 5.0 {
        let (p, o) = (probs.pop().unwrap(), obs.pop().unwrap());
        *probs.last_mut().unwrap() += p;
        *obs.last_mut().unwrap() += o;
    }
    let statistic: f64 = probs
        .iter()
        .zip(&obs)
        .map(|(&p, &o)| {
            let e = p * n as f64;
            (o - e) * (o - e) / e
        })
        .sum();
    let dof = probs.len() - 1;
    let chi = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(PoissonFit {
        statistic,
        dof,
        p_value: 1.0 - chi.cdf(statistic),
    })
}
