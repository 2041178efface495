//! Agiforms on 2D non-simplex polytopes: triangulation enumeration and
//! the universal sums-of-squares criterion.
//!
//! For a convex lattice polygon Q with even vertices and an interior
//! lattice point y, every agiform supported on V(Q) ∪ {y} is a sum of
//! squares iff for every triangulation of Q (on its vertices) and every
//! triangle containing y, the point y lies in that triangle's maximal
//! mediated set. Membership of y in the polygon-wide mediated set is
//! necessary but not sufficient.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::mediated::{maximal_mediated_from, maximal_mediated_set};
use crate::poly::Exponent;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolygonError {
    #[error("polygon support requires 2-dimensional exponents")]
    NotTwoDimensional,
    #[error("need at least 4 vertices (use the simplex machinery for triangles)")]
    TooFewVertices,
    #[error("at most 14 vertices are supported (triangulation count grows as Catalan numbers)")]
    TooManyVertices,
    #[error("vertex {0} is not even")]
    OddVertex(String),
    #[error("vertices are not in strictly convex position")]
    NotConvexPosition,
    #[error("inner point {0} is not strictly interior")]
    InnerNotInterior(String),
    #[error(transparent)]
    Mediated(#[from] crate::mediated::MediatedError),
}

/// Convex lattice polygon with even vertices (stored in counterclockwise
/// order) and a strictly interior lattice point.
#[derive(Debug, Clone)]
pub struct PolygonSupport {
    vertices: Vec<Exponent>,
    inner: Exponent,
}

fn cross(o: &Exponent, a: &Exponent, b: &Exponent) -> i128 {
    let (ox, oy) = (o.0[0] as i128, o.0[1] as i128);
    let (ax, ay) = (a.0[0] as i128, a.0[1] as i128);
    let (bx, by) = (b.0[0] as i128, b.0[1] as i128);
    (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)
}

/// Strict convex hull (no collinear points kept), counterclockwise.
fn convex_hull(points: &[Exponent]) -> Vec<Exponent> {
    let mut pts: Vec<Exponent> = points.to_vec();
    pts.sort_by(|a, b| a.0.cmp(&b.0));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Exponent> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Exponent> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Closed containment of a point in the ccw polygon.
fn polygon_contains(vertices: &[Exponent], p: &Exponent, strict: bool) -> bool {
    let m = vertices.len();
    for i in 0..m {
        let c = cross(&vertices[i], &vertices[(i + 1) % m], p);
        if strict {
            if c <= 0 {
                return false;
            }
        } else if c < 0 {
            return false;
        }
    }
    true
}

impl PolygonSupport {
    pub fn new(vertices: Vec<Exponent>, inner: Exponent) -> Result<Self, PolygonError> {
        if inner.len() != 2 || vertices.iter().any(|v| v.len() != 2) {
            return Err(PolygonError::NotTwoDimensional);
        }
        if vertices.len() < 4 {
            return Err(PolygonError::TooFewVertices);
        }
        if vertices.len() > 14 {
            return Err(PolygonError::TooManyVertices);
        }
        for v in &vertices {
            if !v.is_even() {
                return Err(PolygonError::OddVertex(v.to_string()));
            }
        }
        let hull = convex_hull(&vertices);
        if hull.len() != vertices.len() {
            // duplicates, collinear triples, or interior "vertices"
            return Err(PolygonError::NotConvexPosition);
        }
        if !polygon_contains(&hull, &inner, true) {
            return Err(PolygonError::InnerNotInterior(inner.to_string()));
        }
        Ok(PolygonSupport {
            vertices: hull,
            inner,
        })
    }

    pub fn vertices(&self) -> &[Exponent] {
        &self.vertices
    }

    pub fn inner(&self) -> &Exponent {
        &self.inner
    }

    /// Strictly interior lattice points, sorted.
    pub fn interior_lattice_points(&self) -> Vec<Exponent> {
        self.lattice_points(true)
    }

    /// All lattice points of the closed polygon, sorted.
    pub fn all_lattice_points(&self) -> Vec<Exponent> {
        self.lattice_points(false)
    }

    fn lattice_points(&self, strict: bool) -> Vec<Exponent> {
        let xs: Vec<i64> = self.vertices.iter().map(|v| v.0[0]).collect();
        let ys: Vec<i64> = self.vertices.iter().map(|v| v.0[1]).collect();
        let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
        let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
        let mut out = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                let p = Exponent(vec![x, y]);
                if polygon_contains(&self.vertices, &p, strict) {
                    out.push(p);
                }
            }
        }
        out.sort();
        out
    }

    /// All triangulations on the polygon's vertices, each a sorted list of
    /// vertex-index triples [i, j, k]; deterministic canonical order.
    /// Count is the Catalan number C(m-2).
    pub fn enumerate_triangulations(&self) -> Vec<Vec<[usize; 3]>> {
        fn recurse(i: usize, j: usize) -> Vec<Vec<[usize; 3]>> {
            if j - i < 2 {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for k in i + 1..j {
                for left in recurse(i, k) {
                    for right in recurse(k, j) {
                        let mut t = left.clone();
                        t.push([i, k, j]);
                        t.extend(right.iter().cloned());
                        t.sort();
                        out.push(t);
                    }
                }
            }
            out
        }
        let mut all = recurse(0, self.vertices.len() - 1);
        all.sort();
        all
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TriangleFlag {
    pub triangle: [usize; 3],
    pub contains_inner: bool,
    /// Whether the inner point lies in the triangle's maximal mediated
    /// set; only meaningful when `contains_inner` is true.
    pub inner_in_mediated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TriangulationReport {
    pub triangles: Vec<TriangleFlag>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub universal_sos: bool,
    pub per_triangulation: Vec<TriangulationReport>,
}

/// The universal criterion: every agiform on Q with this inner point is a
/// sum of squares iff every triangle of every triangulation whose closed
/// hull contains the point also contains it in its maximal mediated set.
/// A point on a shared diagonal belongs to both adjacent triangles.
pub fn universal_sos_criterion(poly: &PolygonSupport) -> Result<CriterionReport, PolygonError> {
    let mut universal = true;
    let mut reports = Vec::new();
    for tri in poly.enumerate_triangulations() {
        let mut flags = Vec::new();
        for t in tri {
            let verts = [
                poly.vertices[t[0]].clone(),
                poly.vertices[t[1]].clone(),
                poly.vertices[t[2]].clone(),
            ];
            let contains = triangle_contains_closed(&verts, poly.inner());
            let mut in_mediated = false;
            if contains {
                let ms = maximal_mediated_set(&verts)?;
                in_mediated = ms.delta_star.contains(poly.inner());
                if !in_mediated {
                    universal = false;
                }
            }
            flags.push(TriangleFlag {
                triangle: t,
                contains_inner: contains,
                inner_in_mediated: in_mediated,
            });
        }
        reports.push(TriangulationReport { triangles: flags });
    }
    Ok(CriterionReport {
        universal_sos: universal,
        per_triangulation: reports,
    })
}

fn triangle_contains_closed(verts: &[Exponent; 3], p: &Exponent) -> bool {
    let d1 = cross(&verts[0], &verts[1], p);
    let d2 = cross(&verts[1], &verts[2], p);
    let d3 = cross(&verts[2], &verts[0], p);
    let has_neg = d1 < 0 || d2 < 0 || d3 < 0;
    let has_pos = d1 > 0 || d2 > 0 || d3 > 0;
    !(has_neg && has_pos)
}

/// Necessary condition: membership of the inner point in the maximal
/// V(Q)-mediated subset of Q ∩ Z². A negative answer certifies that no
/// agiform (indeed no polynomial of this support, for any coefficients)
/// is a sum of squares; a positive answer is not sufficient.
pub fn necessity_check_sos(poly: &PolygonSupport) -> bool {
    let all: BTreeSet<Exponent> = poly.all_lattice_points().into_iter().collect();
    let q_star = maximal_mediated_from(&poly.vertices, &all);
    q_star.contains(poly.inner())
}
