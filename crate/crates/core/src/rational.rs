//! Exact rational numbers.
//!
//! [`Rational`] is `num_rational::BigRational`, which already keeps every
//! value in lowest terms with a positive denominator. `Display` renders
//! `p/r`, or just `p` when the denominator is one.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `p/r` or a bare integer. Surrounding whitespace is ignored.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational literal: {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn int(value: impl Into<BigInt>) -> Rational {
    Rational::from_integer(value.into())
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Denominator as an unsigned integer; always at least one.
pub fn denominator(x: &Rational) -> BigUint {
    x.denom().magnitude().clone()
}

pub(crate) fn is_unit_magnitude(x: &Rational) -> bool {
    x.denom().is_one() && x.numer().abs().is_one()
}
