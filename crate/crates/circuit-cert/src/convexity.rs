//! Convexity decisions for circuit polynomials.
//!
//! Three input shapes are recognized. Univariate `c0 + a·x^y + b·x^{2d}`:
//! convex iff y = 1 or (a ≥ 0 and y even). Binary form
//! `c0·z^{2d} + a·x^y·z^{2d-y} + b·x^{2d}`: not convex for odd y or
//! negative a; convex for even y when the b-normalized middle coefficient
//! stays below `(y-1)(2d-y-1)/(y(2d-y))`; unknown in the remaining gap
//! (the criterion is only sufficient there). Any multivariate circuit
//! polynomial with n ≥ 2 is not convex: the [1,2]x[1,2] minor of its
//! Hessian has a Newton-polytope vertex at `2y - 2e1 - 2e2` whose
//! coefficient is negative.
//!
//! All rule evaluations are exact; the needed root-free comparison
//! `a·(b)^{-y/(2d)} ≤ R` is decided as `a^{2d} ≤ R^{2d}·b^y`.

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{validate_circuit, CircuitCheck, CircuitError};
use crate::poly::{Exponent, SparsePoly};
use crate::scalar::{rat, rat_pow, Rat};

#[derive(Debug, Error)]
pub enum ConvexityError {
    #[error("unsupported input shape: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConvexStatus {
    Convex,
    NotConvex,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConvexityRule {
    #[serde(rename = "univariate-rule")]
    UnivariateRule,
    #[serde(rename = "binary-form-rule")]
    BinaryFormRule,
    #[serde(rename = "multivariate-theorem")]
    MultivariateTheorem,
}

#[derive(Debug, Clone)]
pub struct ConvexityVerdict {
    pub status: ConvexStatus,
    pub reason: ConvexityRule,
}

pub fn is_convex(p: &SparsePoly) -> Result<ConvexityVerdict, ConvexityError> {
    if p.dimension() == 1 {
        return univariate_rule(p);
    }
    if p.dimension() == 2 {
        if let Some(v) = binary_form_rule(p)? {
            return Ok(v);
        }
    }
    // multivariate circuit: never convex for n ≥ 2
    match validate_circuit(p)? {
        CircuitCheck::Circuit(f) => {
            if f.dimension() >= 2 {
                Ok(ConvexityVerdict {
                    status: ConvexStatus::NotConvex,
                    reason: ConvexityRule::MultivariateTheorem,
                })
            } else {
                univariate_rule(p)
            }
        }
        _ => Err(ConvexityError::ShapeMismatch(
            "expected a circuit polynomial with one inner term".into(),
        )),
    }
}

/// `c0 + a x^y + b x^{2d}` with c0, b > 0.
fn univariate_rule(p: &SparsePoly) -> Result<ConvexityVerdict, ConvexityError> {
    let mut constant: Option<Rat> = None;
    let mut top: Option<(i64, Rat)> = None;
    let mut middle: Option<(i64, Rat)> = None;
    let deg = p.exponents().map(|e| e.0[0]).max().unwrap_or(0);
    for (e, c) in p.terms() {
        let k = e.0[0];
        if k == 0 {
            constant = Some(c.clone());
        } else if k == deg {
            top = Some((k, c.clone()));
        } else if middle.is_none() {
            middle = Some((k, c.clone()));
        } else {
            return Err(ConvexityError::ShapeMismatch(
                "univariate shape allows at most three terms".into(),
            ));
        }
    }
    let Some(c0) = constant else {
        return Err(ConvexityError::ShapeMismatch(
            "univariate shape needs a constant term".into(),
        ));
    };
    let Some((two_d, b)) = top else {
        return Err(ConvexityError::ShapeMismatch(
            "univariate shape needs a top term".into(),
        ));
    };
    if two_d % 2 != 0 || !b.is_positive() || !c0.is_positive() {
        return Err(ConvexityError::ShapeMismatch(
            "top degree must be even with positive outer coefficients".into(),
        ));
    }
    let status = match middle {
        None => ConvexStatus::Convex, // c0 + b x^{2d}
        Some((y, a)) => {
            if y == 1 || (y % 2 == 0 && !a.is_negative()) {
                ConvexStatus::Convex
            } else {
                ConvexStatus::NotConvex
            }
        }
    };
    Ok(ConvexityVerdict {
        status,
        reason: ConvexityRule::UnivariateRule,
    })
}

/// Detects the homogeneous binary shape; returns `None` when the input is
/// not a binary form so the caller can fall through to the circuit rule.
fn binary_form_rule(p: &SparsePoly) -> Result<Option<ConvexityVerdict>, ConvexityError> {
    let degs: Vec<i64> = p.exponents().map(Exponent::total_degree).collect();
    let two_d = degs[0];
    if !degs.iter().all(|&d| d == two_d) {
        return Ok(None); // not homogeneous
    }
    if two_d % 2 != 0 || p.term_count() > 3 {
        return Err(ConvexityError::ShapeMismatch(
            "binary forms must have even degree and at most three terms".into(),
        ));
    }
    let z_pure = Exponent(vec![0, two_d]);
    let x_pure = Exponent(vec![two_d, 0]);
    let (Some(c0), Some(b)) = (p.coeff(&z_pure), p.coeff(&x_pure)) else {
        return Err(ConvexityError::ShapeMismatch(
            "binary form needs pure terms in both variables".into(),
        ));
    };
    if !c0.is_positive() || !b.is_positive() {
        return Err(ConvexityError::ShapeMismatch(
            "outer coefficients of the form must be positive".into(),
        ));
    }
    let middle: Vec<(&Exponent, &Rat)> = p
        .terms()
        .filter(|(e, _)| **e != z_pure && **e != x_pure)
        .collect();
    let (y, a) = match middle.len() {
        0 => {
            return Ok(Some(ConvexityVerdict {
                // c0 z^{2d} + b x^{2d} with 2d ≥ 2: diagonal Hessian
                status: ConvexStatus::Convex,
                reason: ConvexityRule::BinaryFormRule,
            }));
        }
        1 => (middle[0].0 .0[0], middle[0].1.clone()),
        _ => unreachable!("term count capped at three"),
    };

    if y % 2 != 0 || a.is_negative() {
        // odd y (including y = 1, never convex as a form) or a < 0
        return Ok(Some(ConvexityVerdict {
            status: ConvexStatus::NotConvex,
            reason: ConvexityRule::BinaryFormRule,
        }));
    }
    if a.is_zero() {
        return Ok(Some(ConvexityVerdict {
            status: ConvexStatus::Convex,
            reason: ConvexityRule::BinaryFormRule,
        }));
    }
    // sufficient bound for â = (a/c0)·((b/c0)^{-y/2d}):
    // â ≤ (y-1)(2d-y-1)/(y(2d-y))  ⇔  (a/c0)^{2d} ≤ R^{2d} (b/c0)^y
    let r = rat((y - 1) * (two_d - y - 1), y * (two_d - y));
    let lhs = rat_pow(&(&a / c0), two_d as u64);
    let rhs = rat_pow(&r, two_d as u64) * rat_pow(&(b / c0), y as u64);
    let status = if lhs <= rhs {
        ConvexStatus::Convex
    } else {
        ConvexStatus::Unknown
    };
    Ok(Some(ConvexityVerdict {
        status,
        reason: ConvexityRule::BinaryFormRule,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn verdict(src: &str) -> ConvexityVerdict {
        is_convex(&parse_poly(src).unwrap()).unwrap()
    }

    #[test]
    fn univariate_cases() {
        // y = 1 is convex for any sign of a
        let v = verdict("1 - 5*x1 + x1^4");
        assert_eq!(v.status, ConvexStatus::Convex);
        assert_eq!(v.reason, ConvexityRule::UnivariateRule);
        let v = verdict("1 + 7*x1 + x1^6");
        assert_eq!(v.status, ConvexStatus::Convex);
        // even y with a ≥ 0
        assert_eq!(verdict("1 + x1^2 + x1^6").status, ConvexStatus::Convex);
        // even y with a < 0
        assert_eq!(verdict("1 - x1^2 + x1^6").status, ConvexStatus::NotConvex);
        // odd y > 1
        assert_eq!(verdict("1 + x1^3 + x1^6").status, ConvexStatus::NotConvex);
        // no middle term
        assert_eq!(verdict("2 + 3*x1^4").status, ConvexStatus::Convex);
    }

    #[test]
    fn binary_form_cases() {
        // y = 2, d = 3, a = 1/8 ≤ 3/8
        let v = verdict("x2^6 + 1/8*x1^2*x2^4 + x1^6");
        assert_eq!(v.status, ConvexStatus::Convex);
        assert_eq!(v.reason, ConvexityRule::BinaryFormRule);
        // at the bound exactly
        assert_eq!(
            verdict("x2^6 + 3/8*x1^2*x2^4 + x1^6").status,
            ConvexStatus::Convex
        );
        // beyond the bound: unknown (sufficient criterion only)
        assert_eq!(
            verdict("x2^6 + 1/2*x1^2*x2^4 + x1^6").status,
            ConvexStatus::Unknown
        );
        // odd y is never convex as a form
        assert_eq!(
            verdict("x2^6 + x1*x2^5 + x1^6").status,
            ConvexStatus::NotConvex
        );
        // negative a
        assert_eq!(
            verdict("x2^6 - 1/8*x1^2*x2^4 + x1^6").status,
            ConvexStatus::NotConvex
        );
        // the bound is scale aware: shrinking b must shrink the allowance
        assert_eq!(
            verdict("x2^6 + 3/8*x1^2*x2^4 + 1/1000000*x1^6").status,
            ConvexStatus::Unknown
        );
    }

    #[test]
    fn multivariate_circuits_are_never_convex() {
        let v = verdict("1 + x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2");
        assert_eq!(v.status, ConvexStatus::NotConvex);
        assert_eq!(v.reason, ConvexityRule::MultivariateTheorem);
        // positive inner coefficient changes nothing
        let v = verdict("1 + x1^4 + x2^4 + x1*x2");
        assert_eq!(v.status, ConvexStatus::NotConvex);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        assert!(is_convex(&parse_poly("x1 + x2").unwrap()).is_err());
        assert!(is_convex(&parse_poly("1 + x1^2 + x1^3 + x1^6").unwrap()).is_err());
    }
}
