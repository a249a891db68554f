//! Exact constants of the Rosenthal moment inequalities.
//!
//! For independent centered summands the extremal constant satisfies
//! `C(p)^p = L(p) = E|θ - 1|^p` with `θ ~ Poisson(1)` (proved for even `p`,
//! conjectured for all `p >= 4`); for symmetric summands `S(p)^p = K(p) =
//! E|τ1 - τ2|^p` with `τj ~ Poisson(1/2)` independent. This crate evaluates
//! `K`, `L`, `S`, `G = L^{1/p}` along four independent routes:
//!
//! * log-scale moment series ([`constants::l_series`], [`constants::k_series`]),
//! * exact big-integer combinatorics for integer `p` ([`constants::k_even_exact`]),
//! * Bessel-integral acceleration ([`constants::k_accelerated`]),
//! * saddle-point asymptotics and rigorous envelopes ([`asymptotics`]),
//!
//! plus the one-dimensional extremum searches that produce the sharp ratios
//! against `p / (e log p)` ([`extrema`]) and a Monte-Carlo cross-check ([`mc`]).

// domain gates are written `!(p >= a)` so that NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod constants;
pub mod dyadic;
pub mod extrema;
#[cfg(feature = "mc")]
pub mod mc;
pub mod report;
pub mod series;
pub mod special;

mod parallel;

pub use series::{SeriesConfig, SeriesValue};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {what} = {value} (cap {cap})")]
    Capacity {
        what: &'static str,
        value: u64,
        cap: u64,
    },
    #[error("series did not reach relative tail bound {tol:e} within {max_terms} terms (bound {reached:e})")]
    Budget {
        tol: f64,
        max_terms: usize,
        reached: f64,
    },
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
