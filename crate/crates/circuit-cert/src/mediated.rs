//! Maximal mediated sets and the combinatorial sums-of-squares decision.
//!
//! A set L between the vertex set and the lattice points of an even
//! simplex is mediated when every non-vertex point of L is the midpoint
//! of two distinct even points of L. The unique maximal mediated set Δ*
//! is computed by a deletion fixpoint: starting from all lattice points,
//! repeatedly remove points that lose their mediation witness. The
//! midpoint tests run on doubled coordinates, keeping the inner loop in
//! integers.

use std::collections::BTreeSet;

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::CircuitPoly;
use crate::lattice::{enumerate_lattice_points, GeomError};
use crate::poly::Exponent;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MediatedError {
    #[error("mediated sets require even simplex vertices; {0} is odd")]
    OddVertex(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SimplexClass {
    /// Δ* equals all lattice points: every nonnegative circuit polynomial
    /// on this simplex is a sum of squares.
    H,
    /// Δ* equals the averages of the vertex set: the minimal case.
    M,
    Intermediate,
}

#[derive(Debug, Clone)]
pub struct MediatedSetResult {
    pub delta_star: BTreeSet<Exponent>,
    /// Averages A of the vertex set (even pairs, not necessarily distinct).
    pub a_hat_delta: BTreeSet<Exponent>,
    pub all_points: BTreeSet<Exponent>,
    pub classification: SimplexClass,
}

/// Integer midpoints of even pairs of L: `A` allows equal pairs, `A_bar`
/// requires distinct ones.
pub fn averages(points: &[Exponent]) -> (BTreeSet<Exponent>, BTreeSet<Exponent>) {
    let evens: Vec<&Exponent> = points.iter().filter(|e| e.is_even()).collect();
    let mut a = BTreeSet::new();
    let mut a_bar = BTreeSet::new();
    for (i, s) in evens.iter().enumerate() {
        for t in &evens[i..] {
            // even + even is even, so the midpoint is integral
            let mid = Exponent(s.0.iter().zip(&t.0).map(|(x, y)| (x + y) / 2).collect());
            a.insert(mid.clone());
            if *s != *t {
                a_bar.insert(mid);
            }
        }
    }
    (a, a_bar)
}

/// Deletion fixpoint over an arbitrary even vertex set (also used for
/// polygons, where the vertex set is not a simplex). `all_points` is the
/// lattice point set of the hull. The fixpoint is order independent:
/// once a point has no mediation witness it never regains one, so full
/// sweeps converge to the unique maximal mediated set.
pub(crate) fn maximal_mediated_from(
    vertex_set: &[Exponent],
    all_points: &BTreeSet<Exponent>,
) -> BTreeSet<Exponent> {
    let vertices: BTreeSet<Exponent> = vertex_set.iter().cloned().collect();
    let mut live: BTreeSet<Exponent> = all_points.clone();
    loop {
        let doubled: BTreeSet<Vec<i64>> = live
            .iter()
            .filter(|e| e.is_even())
            .map(|e| e.0.clone())
            .collect();
        let mut removed = Vec::new();
        for beta in live.iter() {
            if vertices.contains(beta) {
                continue;
            }
            // midpoint of two distinct even live points: 2β = s + t
            let twice: Vec<i64> = beta.0.iter().map(|x| 2 * x).collect();
            let supported = doubled.iter().any(|s| {
                let t: Vec<i64> = twice.iter().zip(s).map(|(b, si)| b - si).collect();
                t != *s && doubled.contains(&t)
            });
            if !supported {
                removed.push(beta.clone());
            }
        }
        if removed.is_empty() {
            return live;
        }
        for r in removed {
            live.remove(&r);
        }
    }
}

/// Maximal mediated set of an even simplex with H/M classification.
pub fn maximal_mediated_set(vertices: &[Exponent]) -> Result<MediatedSetResult, MediatedError> {
    for v in vertices {
        if !v.is_even() {
            return Err(MediatedError::OddVertex(v.to_string()));
        }
    }
    let all: BTreeSet<Exponent> = enumerate_lattice_points(vertices)?.into_iter().collect();
    let delta_star = maximal_mediated_from(vertices, &all);
    let (a_hat, _) = averages(vertices);

    debug_assert!(a_hat.is_subset(&delta_star));
    let classification = if delta_star == all {
        SimplexClass::H
    } else if delta_star == a_hat {
        SimplexClass::M
    } else {
        SimplexClass::Intermediate
    };
    Ok(MediatedSetResult {
        delta_star,
        a_hat_delta: a_hat,
        all_points: all,
        classification,
    })
}

#[derive(Debug, Clone)]
pub struct SosResult {
    pub is_sos: bool,
    /// Upper bound on the number of binomial squares in a representation,
    /// |Δ*| - (n+1); absent for the pure monomial-square case.
    pub binomial_square_count: Option<usize>,
}

/// Combinatorial SOS decision for a nonnegative circuit polynomial:
/// f is a sum of squares iff the inner point lies in Δ*, or c > 0 with an
/// even inner point (a sum of monomial squares outright).
pub fn is_sos(f: &CircuitPoly) -> Result<SosResult, MediatedError> {
    if f.c().is_positive() && f.inner_is_even() {
        return Ok(SosResult {
            is_sos: true,
            binomial_square_count: None,
        });
    }
    let ms = maximal_mediated_set(f.vertices())?;
    let inside = ms.delta_star.contains(f.inner());
    Ok(SosResult {
        is_sos: inside,
        binomial_square_count: inside
            .then(|| ms.delta_star.len().saturating_sub(f.dimension() + 1)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sufficiency {
    /// n = 2 and the boundary of ½Δ has at least four lattice points.
    SufficientByBoundary,
    /// ½Δ is an integer dilate M·Δ' with M ≥ n.
    SufficientByDilate,
    Inconclusive,
}

/// Cheap sufficient conditions for the H property, tried before the
/// fixpoint. The boundary count uses gcd sums along the edges of ½Δ; the
/// dilate test divides the edge vectors of ½Δ by their common content.
pub fn h_simplex_sufficient_2d(vertices: &[Exponent]) -> Result<Sufficiency, MediatedError> {
    for v in vertices {
        if !v.is_even() {
            return Err(MediatedError::OddVertex(v.to_string()));
        }
    }
    let n = vertices.first().map_or(0, Exponent::len);
    let half: Vec<Exponent> = vertices
        .iter()
        .map(|v| Exponent(v.0.iter().map(|x| x / 2).collect()))
        .collect();

    if n == 2 && vertices.len() == 3 {
        let mut boundary = 0i64;
        for i in 0..3 {
            let d = half[(i + 1) % 3].sub(&half[i]);
            boundary += gcd_i64(d.0[0].abs(), d.0[1].abs());
        }
        if boundary >= 4 {
            return Ok(Sufficiency::SufficientByBoundary);
        }
    }

    let mut content: i64 = 0;
    for v in &half[1..] {
        let d = v.sub(&half[0]);
        for x in &d.0 {
            content = gcd_i64(content, x.abs());
        }
    }
    if content >= n as i64 {
        return Ok(Sufficiency::SufficientByDilate);
    }
    Ok(Sufficiency::Inconclusive)
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd_i64(b, a % b)
    }
}
