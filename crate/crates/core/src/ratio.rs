//! Helpers for exact rational bookkeeping.

use crate::error::{Error, Result};
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_count(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `a/b`, an integer, or a finite decimal such as `1.99`.
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidParameter(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, fraction)) = s.split_once('.') {
        if fraction.is_empty() || !fraction.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(fraction.len() as u32);
        let digits: BigInt = fraction.parse().map_err(|_| bad())?;
        let magnitude = whole.abs() * &scale + digits;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(num, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical `a/b` text (or `a` for integers).
pub fn show(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn floor_u64(r: &Rational) -> Result<u64> {
    r.floor()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::InvalidParameter(format!("{} does not fit a count", show(r))))
}

pub fn ceil_u64(r: &Rational) -> Result<u64> {
    r.ceil()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::InvalidParameter(format!("{} does not fit a count", show(r))))
}

/// `base^exp` for a nonnegative integer exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Approximate value, for display only.
pub fn approx(r: &Rational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        f64::NAN
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse("6/5").unwrap(), frac(6, 5));
        assert_eq!(parse("1.99").unwrap(), frac(199, 100));
        assert_eq!(parse("-0.5").unwrap(), frac(-1, 2));
        assert_eq!(parse("400").unwrap(), int(400));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn shows_canonically() {
        assert_eq!(show(&frac(10, 4)), "5/2");
        assert_eq!(show(&int(3)), "3");
    }

    #[test]
    fn rounding() {
        assert_eq!(floor_u64(&frac(13, 4)).unwrap(), 3);
        assert_eq!(ceil_u64(&frac(13, 4)).unwrap(), 4);
        assert_eq!(ceil_u64(&int(4)).unwrap(), 4);
    }
}
