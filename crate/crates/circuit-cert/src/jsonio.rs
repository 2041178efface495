//! Canonical JSON interchange formats.
//!
//! Polynomial schema:
//!
//! ```json
//! {"n": 2, "terms": [{"coeff": "p/q", "exp": [2, 3]}, ...]}
//! ```
//!
//! Certificate schema (self-contained, re-checkable with no other state):
//!
//! ```json
//! {"target": <poly>, "pieces": [{"weight": "p/q", "poly": <poly>}, ...],
//!  "residual_norm": 0.0}
//! ```
//!
//! Terms are emitted in graded lexicographic order and rationals in lowest
//! terms, so serialization is byte-deterministic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Exponent, SparsePoly};
use crate::scalar::{parse_rat, rat_to_string, Rat};

#[derive(Debug, Error)]
pub enum JsonIoError {
    #[error("JSON: {0}")]
    Serde(#[from] serde_json::Error),
    #[error("invalid coefficient `{0}`")]
    BadCoefficient(String),
    #[error("invalid weight `{0}`")]
    BadWeight(String),
    #[error("{0}")]
    Poly(#[from] crate::poly::PolyError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exp: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceJson {
    pub weight: String,
    pub poly: PolyJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub target: PolyJson,
    pub pieces: Vec<PieceJson>,
    pub residual_norm: f64,
}

pub fn poly_to_json(p: &SparsePoly) -> PolyJson {
    PolyJson {
        n: p.dimension(),
        terms: p
            .terms()
            .map(|(e, c)| TermJson {
                coeff: rat_to_string(c),
                exp: e.0.clone(),
            })
            .collect(),
    }
}

pub fn poly_from_json(j: &PolyJson) -> Result<SparsePoly, JsonIoError> {
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        let c: Rat =
            parse_rat(&t.coeff).map_err(|_| JsonIoError::BadCoefficient(t.coeff.clone()))?;
        terms.push((Exponent(t.exp.clone()), c));
    }
    Ok(SparsePoly::new(j.n, terms)?)
}

pub fn poly_from_json_str(s: &str) -> Result<SparsePoly, JsonIoError> {
    let j: PolyJson = serde_json::from_str(s)?;
    poly_from_json(&j)
}

pub fn poly_to_json_string(p: &SparsePoly) -> String {
    serde_json::to_string(&poly_to_json(p)).expect("polynomial serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn poly_json_round_trip() {
        let p = parse_poly("1 + x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2").unwrap();
        let s = poly_to_json_string(&p);
        let q = poly_from_json_str(&s).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn deterministic_term_order() {
        let a = poly_to_json_string(&parse_poly("x1 + x2").unwrap());
        let b = poly_to_json_string(&parse_poly("x2 + x1").unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn negative_exponent_in_json_is_allowed_for_laurent() {
        // Laurent supports are representable in JSON (used for debug
        // output of zero standard forms); text input still rejects them.
        let s = r#"{"n":1,"terms":[{"coeff":"1","exp":[-2]},{"coeff":"1","exp":[2]}]}"#;
        let p = poly_from_json_str(s).unwrap();
        assert_eq!(p.term_count(), 2);
    }
}
