//! Exact dyadic rationals `numerator · 2^{-shift}`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Canonical form: the numerator is odd, or `shift == 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BigRationalDyadic {
    numerator: BigInt,
    shift: u64,
}

impl BigRationalDyadic {
    pub fn new(numerator: BigInt, shift: u64) -> Self {
        if numerator.is_zero() {
            return BigRationalDyadic {
                numerator,
                shift: 0,
            };
        }
        let tz = numerator.trailing_zeros().unwrap_or(0).min(shift);
        BigRationalDyadic {
            numerator: numerator >> tz,
            shift: shift - tz,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        BigRationalDyadic::new(n.into(), 0)
    }

    pub fn zero() -> Self {
        BigRationalDyadic::from_int(0)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }

    pub fn is_integer(&self) -> bool {
        self.shift == 0
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numerator.clone())
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.numerator.to_f64().unwrap_or(f64::NAN);
        // shifts here stay far below the exponent range
        n * 2f64.powi(-(self.shift.min(i32::MAX as u64) as i32))
    }
}

impl Add for &BigRationalDyadic {
    type Output = BigRationalDyadic;
    fn add(self, rhs: Self) -> BigRationalDyadic {
        let s = self.shift.max(rhs.shift);
        let a = &self.numerator << (s - self.shift);
        let b = &rhs.numerator << (s - rhs.shift);
        BigRationalDyadic::new(a + b, s)
    }
}

impl Add for BigRationalDyadic {
    type Output = BigRationalDyadic;
    fn add(self, rhs: Self) -> BigRationalDyadic {
        &self + &rhs
    }
}

impl Neg for BigRationalDyadic {
    type Output = BigRationalDyadic;
    fn neg(self) -> BigRationalDyadic {
        BigRationalDyadic {
            numerator: -self.numerator,
            shift: self.shift,
        }
    }
}

impl Sub for &BigRationalDyadic {
    type Output = BigRationalDyadic;
    fn sub(self, rhs: Self) -> BigRationalDyadic {
        self + &(-rhs.clone())
    }
}

impl Mul for &BigRationalDyadic {
    type Output = BigRationalDyadic;
    fn mul(self, rhs: Self) -> BigRationalDyadic {
        BigRationalDyadic::new(&self.numerator * &rhs.numerator, self.shift + rhs.shift)
    }
}

impl Mul for BigRationalDyadic {
    type Output = BigRationalDyadic;
    fn mul(self, rhs: Self) -> BigRationalDyadic {
        &self * &rhs
    }
}

impl fmt::Display for BigRationalDyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.shift)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(n: i64, s: u64) -> BigRationalDyadic {
        BigRationalDyadic::new(BigInt::from(n), s)
    }

    #[test]
    fn canonical_form() {
        let x = d(12, 3);
        assert_eq!(x.numerator(), &BigInt::from(3));
        assert_eq!(x.shift(), 1);
        assert_eq!(d(0, 9).shift(), 0);
        assert_eq!(d(8, 2), d(2, 0));
        assert!(d(8, 2).is_integer());
        assert_eq!(format!("{}", d(3, 2)), "3/2^2");
    }

    #[test]
    fn halves_add_up() {
        let h = d(1, 1);
        assert_eq!(&h + &h, d(1, 0));
        assert_eq!(&d(3, 2) * &d(5, 3), d(15, 5));
        assert_eq!(&d(1, 2) - &d(1, 2), BigRationalDyadic::zero());
        assert_eq!(d(-7, 3).to_f64(), -0.875);
    }

    proptest! {
        #[test]
        fn arithmetic_matches_f64(a in -1_000_000i64..1_000_000, sa in 0u64..20, b in -1_000_000i64..1_000_000, sb in 0u64..20) {
            let x = d(a, sa);
            let y = d(b, sb);
            let fx = a as f64 / 2f64.powi(sa as i32);
            let fy = b as f64 / 2f64.powi(sb as i32);
            prop_assert_eq!((&x + &y).to_f64(), fx + fy);
            prop_assert_eq!((&x * &y).to_f64(), fx * fy);
            let s = &x + &y;
            prop_assert!(s.shift() == 0 || s.numerator().trailing_zeros() == Some(0));
        }
    }
}
