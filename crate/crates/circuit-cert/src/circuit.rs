//! Circuit-support validation.
//!
//! A circuit polynomial has n+2 terms: n+1 simplex vertices with positive
//! coefficients and one additional lattice point. The support is a
//! circuit when the full point set is affinely dependent while every
//! proper subset is affinely independent; with the extra point strictly
//! inside the simplex this is automatic. Validation identifies the inner
//! term from the (unique up to scale) affine dependence of the support.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::RatMat;
use crate::poly::{Exponent, SparsePoly};
use crate::scalar::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("expected n+1 or n+2 terms for dimension {n}, found {got}")]
    WrongTermCount { n: usize, got: usize },
    #[error("support is degenerate: a proper subset is affinely dependent")]
    DegenerateSupport,
    #[error("no term lies in the convex hull of the others")]
    NoInteriorPoint,
    #[error("vertex exponent {0} is not even")]
    VertexNotEven(String),
    #[error("vertex coefficient of {0} is not positive")]
    NonPositiveVertexCoefficient(String),
}

/// Validated circuit polynomial. `vertices`, `lambdas` and `b` are
/// aligned and sorted in graded lexicographic vertex order; `mu` is the
/// least common multiple of the barycentric denominators, so `mu * λ_j`
/// is an integer for every j.
#[derive(Debug, Clone)]
pub struct CircuitPoly {
    base: SparsePoly,
    vertices: Vec<Exponent>,
    inner: Exponent,
    lambdas: Vec<Rat>,
    mu: BigInt,
    c: Rat,
    b: Vec<Rat>,
    vertices_even: bool,
}

impl CircuitPoly {
    pub fn base(&self) -> &SparsePoly {
        &self.base
    }

    pub fn dimension(&self) -> usize {
        self.base.dimension()
    }

    pub fn vertices(&self) -> &[Exponent] {
        &self.vertices
    }

    pub fn inner(&self) -> &Exponent {
        &self.inner
    }

    pub fn lambdas(&self) -> &[Rat] {
        &self.lambdas
    }

    pub fn mu(&self) -> &BigInt {
        &self.mu
    }

    pub fn c(&self) -> &Rat {
        &self.c
    }

    pub fn b(&self) -> &[Rat] {
        &self.b
    }

    pub fn vertices_even(&self) -> bool {
        self.vertices_even
    }

    pub fn inner_is_even(&self) -> bool {
        self.inner.is_even()
    }

    /// Homogenized support matrix: first row all ones, columns the
    /// vertices followed by the inner point.
    pub fn support_matrix(&self) -> RatMat {
        let n = self.dimension();
        let mut m = RatMat::zeros(n + 1, n + 2);
        for (j, v) in self.vertices.iter().chain(std::iter::once(&self.inner)).enumerate() {
            m[(0, j)] = Rat::one();
            for i in 0..n {
                m[(i + 1, j)] = Rat::from_integer(v.0[i].into());
            }
        }
        m
    }
}

/// Outcome of circuit validation. A missing inner term is the c = 0
/// sentinel (a sum of monomial squares), not an error. An inner point on
/// the simplex boundary is routed to face reduction.
#[derive(Debug, Clone)]
pub enum CircuitCheck {
    Circuit(CircuitPoly),
    SumOfMonomialSquares {
        vertices: Vec<Exponent>,
        b: Vec<Rat>,
    },
    BoundaryInner {
        vertices: Vec<Exponent>,
        inner: Exponent,
        /// Barycentric coordinates of the inner point; zero entries mark
        /// the face it lies on.
        lambdas: Vec<Rat>,
    },
}

/// Strict validation: simplex vertices must be even (the nonnegativity
/// theory requires it).
pub fn validate_circuit(p: &SparsePoly) -> Result<CircuitCheck, CircuitError> {
    validate(p, true)
}

/// Amoeba-grade validation: identical except vertices may be odd. The
/// amoeba of a complex variety does not care about parity of the vertex
/// exponents; nonnegativity decisions reject such inputs separately.
pub fn validate_circuit_relaxed(p: &SparsePoly) -> Result<CircuitCheck, CircuitError> {
    validate(p, false)
}

fn homogenized(points: &[&Exponent]) -> RatMat {
    let n = points.first().map_or(0, |e| e.len());
    let mut m = RatMat::zeros(n + 1, points.len());
    for (j, e) in points.iter().enumerate() {
        m[(0, j)] = Rat::one();
        for i in 0..n {
            m[(i + 1, j)] = Rat::from_integer(e.0[i].into());
        }
    }
    m
}

fn validate(p: &SparsePoly, require_even: bool) -> Result<CircuitCheck, CircuitError> {
    let n = p.dimension();
    let k = p.term_count();
    if k == n + 1 {
        return validate_monomial_squares(p, require_even);
    }
    if k != n + 2 {
        return Err(CircuitError::WrongTermCount { n, got: k });
    }

    let exps: Vec<&Exponent> = p.exponents().collect();
    let m = homogenized(&exps);
    let Some(kernel) = m.kernel_primitive() else {
        // kernel dimension != 1: some n+1 of the points are already
        // affinely dependent together with the rest
        return Err(CircuitError::DegenerateSupport);
    };

    let neg: Vec<usize> = (0..k).filter(|&i| kernel[i].is_negative()).collect();
    let pos: Vec<usize> = (0..k).filter(|&i| kernel[i].is_positive()).collect();
    let inner_idx = match (neg.len(), pos.len()) {
        (1, _) => neg[0],
        (_, 1) => pos[0],
        _ => return Err(CircuitError::NoInteriorPoint),
    };

    let inner = exps[inner_idx].clone();
    let vertices: Vec<Exponent> = exps
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != inner_idx)
        .map(|(_, e)| (*e).clone())
        .collect();
    // λ_j = kernel_j / (-kernel_inner), exact convex weights
    let denom = -kernel[inner_idx].clone();
    let lambdas: Vec<Rat> = (0..k)
        .filter(|&i| i != inner_idx)
        .map(|i| Rat::new(kernel[i].clone(), denom.clone()))
        .collect();

    let vertices_even = vertices.iter().all(Exponent::is_even);
    if require_even && !vertices_even {
        let bad = vertices.iter().find(|v| !v.is_even()).unwrap();
        return Err(CircuitError::VertexNotEven(bad.to_string()));
    }
    for v in &vertices {
        let coeff = p.coeff(v).expect("vertex exponent came from the support");
        if !coeff.is_positive() {
            return Err(CircuitError::NonPositiveVertexCoefficient(v.to_string()));
        }
    }

    if lambdas.iter().any(Rat::is_zero) {
        return Ok(CircuitCheck::BoundaryInner {
            vertices,
            inner,
            lambdas,
        });
    }

    let mut mu = BigInt::one();
    for l in &lambdas {
        mu = mu.lcm(l.denom());
    }
    let c = p.coeff(&inner).expect("inner exponent came from the support").clone();
    let b: Vec<Rat> = vertices
        .iter()
        .map(|v| p.coeff(v).unwrap().clone())
        .collect();

    Ok(CircuitCheck::Circuit(CircuitPoly {
        base: p.clone(),
        vertices,
        inner,
        lambdas,
        mu,
        c,
        b,
        vertices_even,
    }))
}

fn validate_monomial_squares(
    p: &SparsePoly,
    require_even: bool,
) -> Result<CircuitCheck, CircuitError> {
    let exps: Vec<&Exponent> = p.exponents().collect();
    let m = homogenized(&exps);
    if m.rank() != exps.len() {
        return Err(CircuitError::DegenerateSupport);
    }
    if require_even {
        if let Some(bad) = exps.iter().find(|e| !e.is_even()) {
            return Err(CircuitError::VertexNotEven(bad.to_string()));
        }
    }
    for e in &exps {
        if !p.coeff(e).unwrap().is_positive() {
            return Err(CircuitError::NonPositiveVertexCoefficient(e.to_string()));
        }
    }
    Ok(CircuitCheck::SumOfMonomialSquares {
        vertices: exps.into_iter().cloned().collect(),
        b: p.terms().map(|(_, c)| c.clone()).collect(),
    })
}
