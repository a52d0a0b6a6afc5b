//! Exact rational arithmetic.
//!
//! Every quantity in the crate (payoff, probability, capacity value) is a
//! [`Rational`]; no floating point appears anywhere. Values stay in reduced
//! form with a positive denominator, so equality is structural and zero
//! tests are exact — indifference between bets is an exact comparison, not
//! a tolerance check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationalError {
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("malformed rational literal: {0:?}")]
    Malformed(String),
}

/// An exact rational number, always reduced, denominator always positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: i64, denominator: i64) -> Result<Self, RationalError> {
        if denominator == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Self(BigRational::new(
            BigInt::from(numerator),
            BigInt::from(denominator),
        )))
    }

    /// Panicking constructor for literals known to be well formed.
    pub fn ratio(numerator: i64, denominator: i64) -> Self {
        Self::new(numerator, denominator).expect("nonzero denominator")
    }

    pub fn from_int(value: i64) -> Self {
        Self(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    /// Round to the nearest multiple of `1/denom`, ties toward +infinity.
    /// Used by the CLI to snap noisy inputs onto an exact grid.
    pub fn snap(&self, denom: u64) -> Self {
        assert!(denom > 0, "snap denominator must be positive");
        let d = BigInt::from(denom);
        // floor(x*d + 1/2) / d
        let scaled = &self.0 * BigRational::from_integer(d.clone())
            + BigRational::new(BigInt::one(), BigInt::from(2));
        Self(BigRational::new(scaled.floor().to_integer(), d))
    }

    /// Lossy conversion for display aids only; never used in computation.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    /// Accepts `p`, `p/q`, and exact decimal literals such as `0.25`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let malformed = || RationalError::Malformed(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let n: BigInt = num.trim().parse().map_err(|_| malformed())?;
            let d: BigInt = den.trim().parse().map_err(|_| malformed())?;
            if d.is_zero() {
                return Err(RationalError::ZeroDenominator);
            }
            return Ok(Self(BigRational::new(n, d)));
        }
        if let Some((whole, frac)) = s.split_once('.') {
            let negative = whole.trim_start().starts_with('-');
            let w: BigInt = if whole.is_empty() || whole == "-" {
                BigInt::zero()
            } else {
                whole.parse().map_err(|_| malformed())?
            };
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            let digits: BigInt = frac.parse().map_err(|_| malformed())?;
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let frac_part = BigRational::new(digits, scale);
            let whole_part = BigRational::from_integer(w);
            let value = if negative {
                whole_part - frac_part
            } else {
                whole_part + frac_part
            };
            return Ok(Self(value));
        }
        let n: BigInt = s.parse().map_err(|_| malformed())?;
        Ok(Self(BigRational::from_integer(n)))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl PartialOrd<Rational> for &Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<Rational> for &Rational {
    fn eq(&self, other: &Rational) -> bool {
        self.0 == other.0
    }
}
