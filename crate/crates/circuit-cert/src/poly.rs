//! Sparse polynomials over exact rationals.
//!
//! A `SparsePoly` is a map from exponent vectors to nonzero rational
//! coefficients. Terms are kept in graded lexicographic order so that
//! iteration, serialization and text rendering are deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::{rat_to_string, Rat};

/// Exponent vector of a monomial. Entries are signed so that Laurent
/// supports (zero standard forms, quotients by the inner monomial) can be
/// represented; parsed input polynomials always have nonnegative entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<i64>);

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Exponent) -> Exponent {
        Exponent(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Ord for Exponent {
    /// Graded lexicographic: total degree first, then lexicographic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial has no terms after canonicalization")]
    Empty,
    #[error("exponent vector {exp} has length {got}, expected dimension {expected}")]
    DimensionMismatch {
        exp: String,
        got: usize,
        expected: usize,
    },
    #[error("dimension must be positive")]
    ZeroDimension,
}

/// Sparse polynomial with exact rational coefficients; no zero
/// coefficients are stored and every exponent vector has length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    n: usize,
    terms: BTreeMap<Exponent, Rat>,
}

impl SparsePoly {
    /// Canonicalizing constructor: coefficients of repeated exponents are
    /// summed and zero sums dropped.
    pub fn new(
        n: usize,
        terms: impl IntoIterator<Item = (Exponent, Rat)>,
    ) -> Result<Self, PolyError> {
        if n == 0 {
            return Err(PolyError::ZeroDimension);
        }
        let mut map: BTreeMap<Exponent, Rat> = BTreeMap::new();
        for (exp, coeff) in terms {
            if exp.len() != n {
                return Err(PolyError::DimensionMismatch {
                    exp: exp.to_string(),
                    got: exp.len(),
                    expected: n,
                });
            }
            let entry = map.entry(exp).or_insert_with(Rat::zero);
            *entry += coeff;
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(PolyError::Empty);
        }
        Ok(SparsePoly { n, terms: map })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &Exponent) -> Option<&Rat> {
        self.terms.get(exp)
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    pub fn scale(&self, t: &Rat) -> Result<SparsePoly, PolyError> {
        SparsePoly::new(self.n, self.terms().map(|(e, c)| (e.clone(), c * t)))
    }

    /// Adds `t * other`; result may be empty, reported as `PolyError::Empty`.
    pub fn add_scaled(&self, other: &SparsePoly, t: &Rat) -> Result<SparsePoly, PolyError> {
        let all = self
            .terms()
            .map(|(e, c)| (e.clone(), c.clone()))
            .chain(other.terms().map(|(e, c)| (e.clone(), c * t)));
        SparsePoly::new(self.n, all)
    }

    /// Shifts the support by `shift` (multiplication by the monomial
    /// `x^shift`).
    pub fn translate_support(&self, shift: &Exponent) -> SparsePoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.add(shift), c.clone()))
            .collect();
        SparsePoly {
            n: self.n,
            terms,
        }
    }

    /// Partial derivative with respect to variable `var` (0-based).
    /// Returns `None` when the derivative is identically zero.
    pub fn partial_derivative(&self, var: usize) -> Option<SparsePoly> {
        assert!(var < self.n);
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            let k = e.0[var];
            if k == 0 {
                continue;
            }
            let mut d = e.clone();
            d.0[var] = k - 1;
            terms.push((d, c * Rat::from_integer(k.into())));
        }
        SparsePoly::new(self.n, terms).ok()
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n);
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut m = crate::scalar::rat_to_f64(c);
            for (xi, ei) in x.iter().zip(&e.0) {
                m *= xi.powi(*ei as i32);
            }
            acc += m;
        }
        acc
    }

    /// Exact evaluation at a rational point. Negative exponents require a
    /// nonzero coordinate; callers only evaluate Laurent supports at
    /// strictly positive points.
    pub fn eval_rat(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.n);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (xi, ei) in x.iter().zip(&e.0) {
                if *ei >= 0 {
                    m *= crate::scalar::rat_pow(xi, *ei as u64);
                } else {
                    m *= crate::scalar::rat_pow(&xi.recip(), ei.unsigned_abs());
                }
            }
            acc += m;
        }
        acc
    }

    /// Canonical text form, graded lexicographic term order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push_str("-");
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            let coeff_is_one = mag == num_traits::One::one();
            let monomial_part: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, k)| **k != 0)
                .map(|(j, k)| {
                    if *k == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{}", j + 1, k)
                    }
                })
                .collect();
            if !coeff_is_one || monomial_part.is_empty() {
                factors.push(rat_to_string(&mag));
            }
            factors.extend(monomial_part);
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Total degree of the polynomial as f64 overflow-safe helper for scaling
/// heuristics in numeric code.
pub fn degree_f64(p: &SparsePoly) -> f64 {
    p.exponents()
        .map(|e| e.total_degree())
        .max()
        .and_then(|d| d.to_f64())
        .unwrap_or(0.0)
}
