//! Exact rational scalars.
//!
//! All coefficient arithmetic in this crate is exact. `Rat` is an
//! arbitrary-precision rational kept in lowest terms with a positive
//! denominator; the canonical zero is `0/1`. Floating point never enters
//! the data model, only derived reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("invalid rational literal `{0}`")]
    InvalidLiteral(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Shorthand for small rationals in tests and fixtures.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// Parses `p` or `p/q` with optional leading sign. Floating-point
/// literals are rejected, not rounded.
pub fn parse_rat(s: &str) -> Result<Rat, ScalarError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ScalarError::InvalidLiteral(s.to_string()));
    }
    let mut parts = t.splitn(2, '/');
    let num_str = parts.next().unwrap().trim();
    let num: BigInt = num_str
        .parse()
        .map_err(|_| ScalarError::InvalidLiteral(s.to_string()))?;
    match parts.next() {
        None => Ok(Rat::from_integer(num)),
        Some(den_str) => {
            let den: BigInt = den_str
                .trim()
                .parse()
                .map_err(|_| ScalarError::InvalidLiteral(s.to_string()))?;
            if den.is_zero() {
                return Err(ScalarError::ZeroDenominator(s.to_string()));
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Canonical rendering: `p` for integers, `p/q` otherwise.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact conversion of a finite `f64`; every finite double is a dyadic
/// rational.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// `base^exp` by binary exponentiation; `exp` may exceed `u32`.
pub fn rat_pow(base: &Rat, exp: u64) -> Rat {
    let mut acc = Rat::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}
