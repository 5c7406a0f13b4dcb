//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// `num / 2^shift`, reduced.
pub fn dyadic(num: impl Into<BigInt>, shift: u32) -> Rational {
    Rational::new(num.into(), BigInt::one() << shift)
}

/// Serializes as `num/den`, always including the denominator.
pub fn to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// True when the reduced denominator has no prime factors other than 2 and 3.
pub fn has_23_denominator(q: &Rational) -> bool {
    let mut d = q.denom().clone();
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    while d.is_even() {
        d /= &two;
    }
    while (&d % &three).is_zero() {
        d /= &three;
    }
    d.is_one()
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}
