use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest `m` for which [`poly_p`] builds `P_2m`.
pub const POLY_CAP: usize = 60;

/// Polynomial with exact integer coefficients, `coeffs[i]` multiplying `x^i`.
/// The zero polynomial is stored as `[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPolynomial { coeffs }
    }

    pub fn one() -> Self {
        IntPolynomial::new(vec![BigInt::from(1)])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a * i)
            .collect();
        IntPolynomial::new(c)
    }

    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigInt::zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
            .collect();
        IntPolynomial::new(c)
    }

    /// Multiply by `x^k` and a scalar.
    fn shift_scale(&self, k: usize, s: i64) -> Self {
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.coeffs.iter().map(|a| a * s));
        IntPolynomial::new(c)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, a| acc * x + a)
    }

    /// Horner evaluation in floating point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * x + a.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}x")?,
                _ => write!(f, "{a}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// `P_2m`, defined by `(d/dθ)^{2m} exp(cos θ) = exp(cos θ) P_2m(cos θ)`:
/// `P_0 = 1`, `P_{2m+2} = (1 - x²)(P'' + 2P' + P) - x(P' + P)`.
pub fn poly_p(m: usize) -> Result<IntPolynomial> {
    if m > POLY_CAP {
        return Err(Error::Capacity {
            what: "polynomial index m",
            value: m as u64,
            cap: POLY_CAP as u64,
        });
    }
    let mut p = IntPolynomial::one();
    for _ in 0..m {
        let d1 = p.derivative();
        let d2 = d1.derivative();
        let q = d2.add(&d1.shift_scale(0, 2)).add(&p);
        let r = d1.add(&p);
        p = q.add(&q.shift_scale(2, -1)).add(&r.shift_scale(1, -1));
    }
    Ok(p)
}
