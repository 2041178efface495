//! Amoeba-theoretic decisions for real circuit polynomials.
//!
//! All thresholds are computed on the zero-standard normalization, i.e.
//! after dividing by the inner monomial: at a log-point w the outer terms
//! have moduli `b_j e^{<w, α(j)-y>}`, Θ_w is their sum, Ψ_w their
//! maximum. The amoeba of f_c is solid (its complement has no bounded
//! component) iff |c| ≤ Θ_f = min_w Θ_w, with the headline verdict
//! deferring to the exact circuit-number comparison so it never depends
//! on float tolerance. One monomial dominating the sum of all others at
//! w (lopsidedness) places w in a complement component of that
//! monomial's order.

use std::cmp::Ordering;
use std::io::Write;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::certify::{compare_c_theta_with, Cmp};
use crate::circuit::CircuitPoly;
use crate::hifi::{HiFi, Interval};
use crate::linalg::RatMat;
use crate::scalar::{rat_to_f64, Rat};

const EPS_BAND: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum AmoebaError {
    #[error("raster output requires a 2-dimensional polynomial")]
    NotTwoDimensional,
    #[error("raster resolution must be between 1 and 4096")]
    BadResolution,
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PointVerdict {
    InAmoeba,
    InBoundedComplement,
    /// Outside the amoeba in the unbounded component of the given order
    /// (a vertex of the Newton polytope).
    InUnboundedComplement(Vec<i64>),
    Undetermined,
}

#[derive(Debug, Clone)]
pub struct PointClass {
    pub verdict: PointVerdict,
    pub theta_w: f64,
    pub psi_w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Solidness {
    Solid,
    NotSolid,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct AmoebaReport {
    pub solid: Solidness,
    pub theta_f: f64,
    pub psi_f: f64,
}

/// Outer-term moduli at w after dividing by the inner monomial.
fn outer_terms_at(f: &CircuitPoly, w: &[f64]) -> Vec<f64> {
    f.vertices()
        .iter()
        .zip(f.b())
        .map(|(a, b)| {
            let d = a.sub(f.inner());
            let dot: f64 = d.0.iter().zip(w).map(|(&x, wi)| x as f64 * wi).sum();
            rat_to_f64(b) * dot.exp()
        })
        .collect()
}

/// (Θ_w, Ψ_w): sum and maximum of the outer-term moduli at w.
pub fn thresholds_at(f: &CircuitPoly, w: &[f64]) -> (f64, f64) {
    let terms = outer_terms_at(f, w);
    let sum = terms.iter().sum();
    let max = terms.iter().cloned().fold(0.0f64, f64::max);
    (sum, max)
}

/// Ψ_f = min_w Ψ_w: the minimum of the maximum outer modulus. The
/// gradients α(j) - y positively span R^n (the inner point is interior),
/// so the min-max is attained where all n+1 affine functions
/// log b_j + <α(j)-y, w> are equal; that linear system is always
/// nonsingular.
pub fn psi_f(f: &CircuitPoly) -> f64 {
    let n = f.dimension();
    let mut m = vec![vec![0.0f64; n + 1]; n + 1];
    let mut rhs = vec![0.0f64; n + 1];
    for (j, (a, b)) in f.vertices().iter().zip(f.b()).enumerate() {
        let d = a.sub(f.inner());
        for i in 0..n {
            m[j][i] = d.0[i] as f64;
        }
        m[j][n] = -1.0;
        rhs[j] = -rat_to_f64(b).ln();
    }
    let sol = solve_dense(&m, &rhs).expect("equal-value system is nonsingular");
    sol[n].exp()
}

/// Interval enclosure of log Ψ_f, for the excluded-regime solidness
/// comparison.
fn log_psi_interval(f: &CircuitPoly, bits: usize) -> Interval {
    let n = f.dimension();
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(n + 1);
    for a in f.vertices() {
        let d = a.sub(f.inner());
        let mut row: Vec<Rat> = d.0.iter().map(|&x| Rat::from_integer(x.into())).collect();
        row.push(Rat::from_integer((-1).into()));
        rows.push(row);
    }
    let m = RatMat::from_rows(rows);
    let inv = m.inverse().expect("equal-value system is nonsingular");
    let mut h = HiFi::new(bits);
    // t = last row of inv · (-log b)
    let mut acc = h.exact_int(&BigInt::from(0));
    for (j, b) in f.b().iter().enumerate() {
        let lb = h.ln_rat(b);
        let w = h.from_rat(&inv[(n, j)]);
        let term = h.mul(&w, &lb);
        acc = h.sub(&acc, &term);
    }
    acc
}

fn solve_dense(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &r)| {
            let mut v = row.clone();
            v.push(r);
            v
        })
        .collect();
    for c in 0..n {
        let (p, mag) = (c..n)
            .map(|i| (i, m[i][c].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())?;
        if mag < 1e-14 {
            return None;
        }
        m.swap(c, p);
        let piv = m[c][c];
        for j in c..=n {
            m[c][j] /= piv;
        }
        for i in 0..n {
            if i != c && m[i][c] != 0.0 {
                let f = m[i][c];
                for j in c..=n {
                    m[i][j] -= f * m[c][j];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n]).collect())
}

/// Classifies a log-point against the amoeba of f. Membership in the
/// interval [Ψ_w, Θ_w] certifies the point is in the amoeba for real
/// negative c (and by sign symmetry whenever the inner point has an odd
/// coordinate); one dominating term certifies a complement component;
/// anything else is honestly undetermined.
pub fn classify_point(f: &CircuitPoly, w: &[f64]) -> PointClass {
    let terms = outer_terms_at(f, w);
    let theta_w: f64 = terms.iter().sum();
    let psi_w = terms.iter().cloned().fold(0.0f64, f64::max);
    let m = rat_to_f64(&f.c().abs());

    let verdict = if m > theta_w * (1.0 + EPS_BAND) {
        PointVerdict::InBoundedComplement
    } else {
        let sign_effective = f.c().is_negative() || !f.inner_is_even();
        if sign_effective && m >= psi_w * (1.0 - EPS_BAND) && m <= theta_w * (1.0 + EPS_BAND) {
            PointVerdict::InAmoeba
        } else {
            // full lopsidedness over all n+2 terms
            let total: f64 = theta_w + m;
            let mut dominant: Option<usize> = None;
            for (j, t) in terms.iter().enumerate() {
                if *t > (total - t) * (1.0 + EPS_BAND) {
                    dominant = Some(j);
                    break;
                }
            }
            if let Some(j) = dominant {
                PointVerdict::InUnboundedComplement(f.vertices()[j].0.clone())
            } else {
                PointVerdict::Undetermined
            }
        }
    };
    PointClass {
        verdict,
        theta_w,
        psi_w,
    }
}

/// Solidness decision. Outside the monomial-square regime (c > 0 with an
/// even inner point) the answer is exact: solid iff |c| ≤ Θ_f. In the
/// excluded regime only |c| ≤ Ψ_f (solid) and |c| > Θ_f (not solid) are
/// decidable; the middle band is reported unknown.
pub fn is_solid(f: &CircuitPoly) -> AmoebaReport {
    let theta = crate::certify::theta_f(f);
    let psi = psi_f(f);
    let cmp = compare_c_theta_with(f, 128);

    let excluded_regime = f.c().is_positive() && f.inner_is_even();
    let solid = if !excluded_regime {
        match cmp.relation {
            Cmp::Less | Cmp::Equal => Solidness::Solid,
            Cmp::Greater => Solidness::NotSolid,
        }
    } else {
        // |c| vs Ψ_f via interval ladder; no exact fallback exists since
        // Ψ_f is transcendental in general
        let mut verdict = Solidness::Unknown;
        let mut bits = 256;
        while bits <= 4096 {
            let mut h = HiFi::new(bits);
            let lc = h.ln_rat(&f.c().abs());
            let lpsi = log_psi_interval(f, bits);
            match HiFi::certified_cmp(&lc, &lpsi) {
                Some(Ordering::Less) => {
                    verdict = Solidness::Solid;
                    break;
                }
                Some(Ordering::Greater) => {
                    verdict = if cmp.relation == Cmp::Greater {
                        Solidness::NotSolid
                    } else {
                        Solidness::Unknown
                    };
                    break;
                }
                _ => bits *= 2,
            }
        }
        verdict
    };

    AmoebaReport {
        solid,
        theta_f: theta,
        psi_f: psi,
    }
}

#[derive(Debug, Clone)]
pub struct RasterGrid {
    pub resolution: usize,
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    /// Row-major, row = w2 index from lo to hi, column = w1 index.
    pub cells: Vec<PointClass>,
}

/// Classifies every point of a resolution² grid over the box. Only
/// defined for two variables.
pub fn raster(
    f: &CircuitPoly,
    lo: [f64; 2],
    hi: [f64; 2],
    resolution: usize,
) -> Result<RasterGrid, AmoebaError> {
    if f.dimension() != 2 {
        return Err(AmoebaError::NotTwoDimensional);
    }
    if resolution == 0 || resolution > 4096 {
        return Err(AmoebaError::BadResolution);
    }
    let step = |a: f64, b: f64, i: usize| {
        if resolution == 1 {
            0.5 * (a + b)
        } else {
            a + (b - a) * i as f64 / (resolution - 1) as f64
        }
    };
    let mut cells = Vec::with_capacity(resolution * resolution);
    for iy in 0..resolution {
        let w2 = step(lo[1], hi[1], iy);
        for ix in 0..resolution {
            let w1 = step(lo[0], hi[0], ix);
            cells.push(classify_point(f, &[w1, w2]));
        }
    }
    Ok(RasterGrid {
        resolution,
        lo,
        hi,
        cells,
    })
}

/// CSV rows (w1, w2, verdict, theta_w, psi_w).
pub fn write_csv<W: Write>(grid: &RasterGrid, out: &mut W) -> Result<(), AmoebaError> {
    writeln!(out, "w1,w2,verdict,theta_w,psi_w")?;
    let r = grid.resolution;
    let step = |a: f64, b: f64, i: usize| {
        if r == 1 {
            0.5 * (a + b)
        } else {
            a + (b - a) * i as f64 / (r - 1) as f64
        }
    };
    for iy in 0..r {
        for ix in 0..r {
            let cell = &grid.cells[iy * r + ix];
            let verdict = match &cell.verdict {
                PointVerdict::InAmoeba => "amoeba".to_string(),
                PointVerdict::InBoundedComplement => "bounded-complement".to_string(),
                PointVerdict::InUnboundedComplement(o) => {
                    let parts: Vec<String> = o.iter().map(|x| x.to_string()).collect();
                    format!("unbounded-complement({})", parts.join(";"))
                }
                PointVerdict::Undetermined => "undetermined".to_string(),
            };
            writeln!(
                out,
                "{},{},{},{},{}",
                step(grid.lo[0], grid.hi[0], ix),
                step(grid.lo[1], grid.hi[1], iy),
                verdict,
                cell.theta_w,
                cell.psi_w
            )?;
        }
    }
    Ok(())
}

/// Binary 8-bit PGM (P5), row-major from the top row (largest w2).
/// Pixel semantics: amoeba 40 (dark), bounded complement 255,
/// unbounded complement 220, undetermined 128 (mid-gray).
pub fn write_pgm<W: Write>(grid: &RasterGrid, out: &mut W) -> Result<(), AmoebaError> {
    let r = grid.resolution;
    write!(out, "P5\n{r} {r}\n255\n")?;
    let mut bytes = Vec::with_capacity(r * r);
    for iy in (0..r).rev() {
        for ix in 0..r {
            let v = match grid.cells[iy * r + ix].verdict {
                PointVerdict::InAmoeba => 40u8,
                PointVerdict::InBoundedComplement => 255,
                PointVerdict::InUnboundedComplement(_) => 220,
                PointVerdict::Undetermined => 128,
            };
            bytes.push(v);
        }
    }
    out.write_all(&bytes)?;
    Ok(())
}

/// Number of 4-connected components among the bounded-complement cells.
pub fn bounded_component_count(grid: &RasterGrid) -> usize {
    let r = grid.resolution;
    let is_bc = |i: usize| grid.cells[i].verdict == PointVerdict::InBoundedComplement;
    let mut seen = vec![false; r * r];
    let mut components = 0;
    for start in 0..r * r {
        if seen[start] || !is_bc(start) {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            let (x, y) = (i % r, i / r);
            let mut push = |j: usize| {
                if !seen[j] && is_bc(j) {
                    seen[j] = true;
                    stack.push(j);
                }
            };
            if x > 0 {
                push(i - 1);
            }
            if x + 1 < r {
                push(i + 1);
            }
            if y > 0 {
                push(i - r);
            }
            if y + 1 < r {
                push(i + r);
            }
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{validate_circuit, validate_circuit_relaxed, CircuitCheck};
    use crate::parse::parse_poly;

    fn motzkin() -> CircuitPoly {
        let p = parse_poly("1 + x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2").unwrap();
        match validate_circuit(&p).unwrap() {
            CircuitCheck::Circuit(c) => c,
            _ => unreachable!(),
        }
    }

    fn fig1() -> CircuitPoly {
        // odd vertices are fine for amoeba decisions
        let p = parse_poly("1 + x1^2*x2 + x1*x2^2 - 4*x1*x2").unwrap();
        match validate_circuit_relaxed(&p).unwrap() {
            CircuitCheck::Circuit(c) => c,
            _ => unreachable!(),
        }
    }

    #[test]
    fn motzkin_thresholds_at_origin() {
        let f = motzkin();
        let (theta, psi) = thresholds_at(&f, &[0.0, 0.0]);
        assert!((theta - 3.0).abs() < 1e-12);
        assert!((psi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dominance_at_large_w() {
        let f = motzkin();
        let w = [40.0, 10.0];
        let (theta, psi) = thresholds_at(&f, &w);
        assert!(psi / theta > 0.99);
    }

    #[test]
    fn psi_of_motzkin_is_one() {
        let f = motzkin();
        assert!((psi_f(&f) - 1.0).abs() < 1e-10);
        assert!(psi_f(&f) <= crate::certify::theta_f(&f) + 1e-10);
    }

    #[test]
    fn psi_scales_linearly() {
        let f = motzkin();
        let p2 = parse_poly("5 + 5*x1^4*x2^2 + 5*x1^2*x2^4 - 15*x1^2*x2^2").unwrap();
        let CircuitCheck::Circuit(f5) = validate_circuit(&p2).unwrap() else {
            panic!()
        };
        assert!((psi_f(&f5) - 5.0 * psi_f(&f)).abs() < 1e-9);
    }

    #[test]
    fn fig1_point_classification() {
        let f = fig1();
        let c = classify_point(&f, &[0.0, 0.0]);
        assert!((c.theta_w - 3.0).abs() < 1e-12);
        assert_eq!(c.verdict, PointVerdict::InBoundedComplement);
    }

    #[test]
    fn motzkin_boundary_point_is_in_amoeba() {
        let f = motzkin();
        let c = classify_point(&f, &[0.0, 0.0]);
        assert_eq!(c.verdict, PointVerdict::InAmoeba);
    }

    #[test]
    fn far_points_are_in_unbounded_components() {
        let f = motzkin();
        // strongly favor the vertex (4,2): normalized direction (2,0)
        let c = classify_point(&f, &[50.0, 0.0]);
        match c.verdict {
            PointVerdict::InUnboundedComplement(o) => assert_eq!(o, vec![4, 2]),
            other => panic!("expected unbounded complement, got {other:?}"),
        }
    }

    #[test]
    fn solidness_verdicts() {
        let r = is_solid(&motzkin());
        assert_eq!(r.solid, Solidness::Solid);
        assert!((r.theta_f - 3.0).abs() < 1e-10);

        let r = is_solid(&fig1());
        assert_eq!(r.solid, Solidness::NotSolid);
        assert!((r.theta_f - 3.0).abs() < 1e-10);
    }

    #[test]
    fn excluded_regime_uses_psi() {
        // c > 0 with even inner point: only Ψ and Θ bounds are decisive
        let p = parse_poly("1 + x1^4*x2^2 + x1^2*x2^4 + 1/2*x1^2*x2^2").unwrap();
        let CircuitCheck::Circuit(f) = validate_circuit(&p).unwrap() else {
            panic!()
        };
        assert_eq!(is_solid(&f).solid, Solidness::Solid); // 1/2 < Ψ = 1

        let p = parse_poly("1 + x1^4*x2^2 + x1^2*x2^4 + 5*x1^2*x2^2").unwrap();
        let CircuitCheck::Circuit(f) = validate_circuit(&p).unwrap() else {
            panic!()
        };
        assert_eq!(is_solid(&f).solid, Solidness::NotSolid); // 5 > Θ = 3

        let p = parse_poly("1 + x1^4*x2^2 + x1^2*x2^4 + 2*x1^2*x2^2").unwrap();
        let CircuitCheck::Circuit(f) = validate_circuit(&p).unwrap() else {
            panic!()
        };
        assert_eq!(is_solid(&f).solid, Solidness::Unknown); // Ψ < 2 < Θ
    }

    #[test]
    fn single_cell_raster_matches_classify() {
        let f = fig1();
        let g = raster(&f, [0.0, 0.0], [0.0, 0.0], 1).unwrap();
        assert_eq!(g.cells.len(), 1);
        assert_eq!(g.cells[0].verdict, classify_point(&f, &[0.0, 0.0]).verdict);
    }

    #[test]
    fn fig1_raster_has_one_bounded_component_and_motzkin_none() {
        let f = fig1();
        let g = raster(&f, [-3.0, -3.0], [3.0, 3.0], 64).unwrap();
        assert_eq!(bounded_component_count(&g), 1);

        let m = motzkin();
        let g = raster(&m, [-3.0, -3.0], [3.0, 3.0], 64).unwrap();
        assert_eq!(bounded_component_count(&g), 0);
    }

    #[test]
    fn pgm_and_csv_emission() {
        let f = fig1();
        let g = raster(&f, [-1.0, -1.0], [1.0, 1.0], 8).unwrap();
        let mut pgm = Vec::new();
        write_pgm(&g, &mut pgm).unwrap();
        assert!(pgm.starts_with(b"P5\n8 8\n255\n"));
        assert_eq!(pgm.len(), "P5\n8 8\n255\n".len() + 64);
        let mut csv = Vec::new();
        write_csv(&g, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().count(), 65);
        assert!(text.starts_with("w1,w2,verdict,theta_w,psi_w"));
    }

    #[test]
    fn raster_rejects_bad_inputs() {
        let f = fig1();
        assert!(matches!(
            raster(&f, [0.0, 0.0], [1.0, 1.0], 5000),
            Err(AmoebaError::BadResolution)
        ));
    }
}
