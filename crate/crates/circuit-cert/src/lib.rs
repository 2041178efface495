//! Exact certification toolkit for polynomials supported on circuits.
//!
//! A circuit polynomial is a sparse polynomial whose support consists of
//! the n+1 vertices of a lattice simplex (with positive coefficients)
//! plus one additional lattice point of the simplex. For this class,
//! nonnegativity, sums-of-squares membership, SONC decomposability,
//! amoeba solidness and convexity are all decidable exactly from the
//! coefficients and the combinatorics of the support. This crate
//! implements those decisions with exact rational arithmetic and emits
//! machine-checkable certificates and witnesses.
//!
//! Entry points:
//!
//! * [`parse::parse_poly`] — text or JSON input to [`poly::SparsePoly`].
//! * [`circuit::validate_circuit`] — circuit structure and barycentric data.
//! * [`certify`] — nonnegativity: circuit-number comparison, boundary
//!   zeros, witnesses, face reduction.
//! * [`mediated`] — maximal mediated sets and the combinatorial SOS test.
//! * [`sonc`] — decomposition into nonnegative circuit pieces and
//!   certificate verification.
//! * [`amoeba`] — solidness, lopsidedness classification, rasters.
//! * [`convexity`] — the univariate/binary-form/multivariate rules.
//! * [`polygon`] — triangulation-based universal SOS criterion on 2D
//!   polytopes.

pub mod amoeba;
pub mod certify;
pub mod circuit;
pub mod convexity;
pub mod hifi;
pub mod jsonio;
pub mod lattice;
pub mod linalg;
pub mod mediated;
pub mod parse;
pub mod poly;
pub mod polygon;
pub mod scalar;
pub mod sonc;

pub use circuit::{validate_circuit, validate_circuit_relaxed, CircuitCheck, CircuitPoly};
pub use parse::parse_poly;
pub use poly::{Exponent, SparsePoly};
pub use scalar::Rat;
