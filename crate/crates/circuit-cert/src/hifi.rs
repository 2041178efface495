//! High-precision interval arithmetic for log-domain comparisons.
//!
//! Wraps `astro-float` with directed rounding. Intervals enclose the true
//! value; a comparison is only reported when the intervals separate, so a
//! caller can fall back to exact rational arithmetic on overlap.

use astro_float::{BigFloat, Consts, RoundingMode, Sign, WORD_BIT_SIZE};
use num_bigint::BigInt;
use num_traits::Signed;
use std::cmp::Ordering;

use crate::scalar::Rat;

#[derive(Debug, Clone)]
pub struct Interval {
    pub lo: BigFloat,
    pub hi: BigFloat,
}

pub struct HiFi {
    prec: usize,
    cc: Consts,
}

fn bf_cmp(a: &BigFloat, b: &BigFloat) -> Option<Ordering> {
    a.cmp(b).map(|s| s.cmp(&0))
}

/// Exact conversion: the integer becomes the full mantissa.
fn bigint_to_bigfloat(x: &BigInt) -> BigFloat {
    debug_assert_eq!(WORD_BIT_SIZE, 64);
    let (sign, digits) = x.to_u64_digits();
    if digits.is_empty() {
        return BigFloat::from_i64(0, 64);
    }
    let e = (digits.len() * 64) as astro_float::Exponent;
    let s = if sign == num_bigint::Sign::Minus {
        Sign::Neg
    } else {
        Sign::Pos
    };
    BigFloat::from_words(&digits, s, e)
}

impl HiFi {
    pub fn new(prec_bits: usize) -> Self {
        HiFi {
            prec: prec_bits.max(64),
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn exact_int(&mut self, x: &BigInt) -> Interval {
        let v = bigint_to_bigfloat(x);
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    /// Encloses a rational in a directed-rounded quotient.
    pub fn from_rat(&mut self, q: &Rat) -> Interval {
        let num = bigint_to_bigfloat(q.numer());
        let den = bigint_to_bigfloat(q.denom());
        let lo = num.div(&den, self.prec, RoundingMode::Down);
        let hi = num.div(&den, self.prec, RoundingMode::Up);
        Interval { lo, hi }
    }

    /// Natural log of a positive rational.
    pub fn ln_rat(&mut self, q: &Rat) -> Interval {
        debug_assert!(q.is_positive());
        let iv = self.from_rat(q);
        self.ln(&iv)
    }

    pub fn ln(&mut self, x: &Interval) -> Interval {
        let lo = x.lo.ln(self.prec, RoundingMode::Down, &mut self.cc);
        let hi = x.hi.ln(self.prec, RoundingMode::Up, &mut self.cc);
        Interval { lo, hi }
    }

    pub fn exp(&mut self, x: &Interval) -> Interval {
        let lo = x.lo.exp(self.prec, RoundingMode::Down, &mut self.cc);
        let hi = x.hi.exp(self.prec, RoundingMode::Up, &mut self.cc);
        Interval { lo, hi }
    }

    pub fn add(&mut self, a: &Interval, b: &Interval) -> Interval {
        Interval {
            lo: a.lo.add(&b.lo, self.prec, RoundingMode::Down),
            hi: a.hi.add(&b.hi, self.prec, RoundingMode::Up),
        }
    }

    pub fn sub(&mut self, a: &Interval, b: &Interval) -> Interval {
        Interval {
            lo: a.lo.sub(&b.hi, self.prec, RoundingMode::Down),
            hi: a.hi.sub(&b.lo, self.prec, RoundingMode::Up),
        }
    }

    pub fn mul(&mut self, a: &Interval, b: &Interval) -> Interval {
        let candidates = [
            (a.lo.mul(&b.lo, self.prec, RoundingMode::Down), a.lo.mul(&b.lo, self.prec, RoundingMode::Up)),
            (a.lo.mul(&b.hi, self.prec, RoundingMode::Down), a.lo.mul(&b.hi, self.prec, RoundingMode::Up)),
            (a.hi.mul(&b.lo, self.prec, RoundingMode::Down), a.hi.mul(&b.lo, self.prec, RoundingMode::Up)),
            (a.hi.mul(&b.hi, self.prec, RoundingMode::Down), a.hi.mul(&b.hi, self.prec, RoundingMode::Up)),
        ];
        let mut lo = candidates[0].0.clone();
        let mut hi = candidates[0].1.clone();
        for (l, h) in &candidates[1..] {
            if bf_cmp(l, &lo) == Some(Ordering::Less) {
                lo = l.clone();
            }
            if bf_cmp(h, &hi) == Some(Ordering::Greater) {
                hi = h.clone();
            }
        }
        Interval { lo, hi }
    }

    pub fn neg(&self, a: &Interval) -> Interval {
        Interval {
            lo: a.hi.neg(),
            hi: a.lo.neg(),
        }
    }

    /// Dot product of a rational weight vector with log intervals.
    pub fn weighted_sum(&mut self, weights: &[Rat], xs: &[Interval]) -> Interval {
        debug_assert_eq!(weights.len(), xs.len());
        let mut acc = Interval {
            lo: BigFloat::from_i64(0, self.prec),
            hi: BigFloat::from_i64(0, self.prec),
        };
        for (w, x) in weights.iter().zip(xs) {
            let wi = self.from_rat(w);
            let term = self.mul(&wi, x);
            acc = self.add(&acc, &term);
        }
        acc
    }

    /// Certified comparison: `Some(ordering)` only when the intervals are
    /// disjoint.
    pub fn certified_cmp(a: &Interval, b: &Interval) -> Option<Ordering> {
        if bf_cmp(&a.hi, &b.lo) == Some(Ordering::Less) {
            return Some(Ordering::Less);
        }
        if bf_cmp(&a.lo, &b.hi) == Some(Ordering::Greater) {
            return Some(Ordering::Greater);
        }
        None
    }

    pub fn mid_f64(&self, a: &Interval) -> f64 {
        let lo = bigfloat_to_f64(&a.lo);
        let hi = bigfloat_to_f64(&a.hi);
        0.5 * (lo + hi)
    }
}

pub fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf() {
        return if x.sign() == Some(Sign::Neg) {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    let (m, _n, s, e, _inexact) = x.as_raw_parts().expect("finite bigfloat");
    // value = (mantissa fraction in [1/2, 1)) * 2^e; the top two words
    // carry more bits than an f64 can hold
    let top = m.last().copied().unwrap_or(0);
    let mut value = top as f64;
    if m.len() >= 2 {
        value += m[m.len() - 2] as f64 / 1.8446744073709552e19; // 2^64
    }
    let shift = e as i64 - 64;
    let scaled = if shift.abs() > 1060 {
        if shift > 0 {
            f64::INFINITY * value.signum()
        } else {
            0.0
        }
    } else {
        value * 2f64.powi(shift as i32)
    };
    if s == Sign::Neg {
        -scaled
    } else {
        scaled
    }
}
