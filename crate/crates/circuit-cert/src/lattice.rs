//! Exact lattice and simplex geometry: barycentric solves, lattice-point
//! enumeration, standard-form transformations and Gale duals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::circuit::CircuitPoly;
use crate::linalg::RatMat;
use crate::poly::{Exponent, SparsePoly};
use crate::scalar::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("degenerate simplex: vertices are affinely dependent")]
    DegenerateSimplex,
    #[error("point is not in the affine hull of the given vertices")]
    OutsideAffineHull,
    #[error("support matrix is rank deficient")]
    RankDeficient,
    #[error("support matrix has wrong shape: {0}")]
    BadShape(String),
    #[error("bounding box too large to enumerate")]
    BoxTooLarge,
    #[error("{0}")]
    Poly(#[from] crate::poly::PolyError),
    #[error("polynomial is not supported on a simplex with interior points: {0}")]
    NotSimplexSupport(String),
}

fn homogeneous_matrix(vertices: &[Exponent]) -> RatMat {
    let n = vertices.first().map_or(0, Exponent::len);
    let mut m = RatMat::zeros(n + 1, vertices.len());
    for (j, v) in vertices.iter().enumerate() {
        m[(0, j)] = Rat::one();
        for i in 0..n {
            m[(i + 1, j)] = Rat::from_integer(v.0[i].into());
        }
    }
    m
}

/// Exact barycentric coordinates of `point` with respect to `n+1`
/// affinely independent vertices in ambient dimension `n`. Entries may
/// be negative or zero; interiority is the caller's interpretation.
pub fn barycentric(vertices: &[Exponent], point: &Exponent) -> Result<Vec<Rat>, GeomError> {
    let n = point.len();
    if vertices.len() != n + 1 {
        return Err(GeomError::BadShape(format!(
            "expected {} vertices, got {}",
            n + 1,
            vertices.len()
        )));
    }
    let m = homogeneous_matrix(vertices);
    if m.rank() != n + 1 {
        return Err(GeomError::DegenerateSimplex);
    }
    let mut rhs = Vec::with_capacity(n + 1);
    rhs.push(Rat::one());
    rhs.extend(point.0.iter().map(|&x| Rat::from_integer(x.into())));
    m.solve(&rhs).ok_or(GeomError::OutsideAffineHull)
}

/// Affine coordinates with respect to an affinely independent set of any
/// size (used on faces of a simplex, where the hull is lower
/// dimensional). Errors when the point is outside the affine hull.
pub fn affine_coordinates(vertices: &[Exponent], point: &Exponent) -> Result<Vec<Rat>, GeomError> {
    let m = homogeneous_matrix(vertices);
    if m.rank() != vertices.len() {
        return Err(GeomError::DegenerateSimplex);
    }
    let mut rhs = Vec::with_capacity(point.len() + 1);
    rhs.push(Rat::one());
    rhs.extend(point.0.iter().map(|&x| Rat::from_integer(x.into())));
    m.solve(&rhs).ok_or(GeomError::OutsideAffineHull)
}

/// All lattice points of the closed simplex, by bounding-box scan with an
/// exact barycentric filter. Result is sorted (graded lexicographic) and
/// deterministic.
pub fn enumerate_lattice_points(vertices: &[Exponent]) -> Result<Vec<Exponent>, GeomError> {
    let n = vertices.first().map_or(0, Exponent::len);
    if vertices.len() != n + 1 {
        return Err(GeomError::BadShape(format!(
            "expected {} vertices, got {}",
            n + 1,
            vertices.len()
        )));
    }
    let m = homogeneous_matrix(vertices);
    let inv = m.inverse().ok_or(GeomError::DegenerateSimplex)?;

    let lo: Vec<i64> = (0..n)
        .map(|i| vertices.iter().map(|v| v.0[i]).min().unwrap())
        .collect();
    let hi: Vec<i64> = (0..n)
        .map(|i| vertices.iter().map(|v| v.0[i]).max().unwrap())
        .collect();
    let mut volume: u128 = 1;
    for i in 0..n {
        let side = (hi[i] - lo[i] + 1) as u128;
        volume = volume.checked_mul(side).ok_or(GeomError::BoxTooLarge)?;
        if volume > 50_000_000 {
            return Err(GeomError::BoxTooLarge);
        }
    }

    let mut out = Vec::new();
    let mut cursor = lo.clone();
    'scan: loop {
        let mut rhs = Vec::with_capacity(n + 1);
        rhs.push(Rat::one());
        rhs.extend(cursor.iter().map(|&x| Rat::from_integer(x.into())));
        let lam = inv.mul_vec(&rhs);
        if lam.iter().all(|l| !l.is_negative()) {
            out.push(Exponent(cursor.clone()));
        }
        for i in (0..n).rev() {
            if cursor[i] < hi[i] {
                cursor[i] += 1;
                continue 'scan;
            }
            cursor[i] = lo[i];
            if i == 0 {
                break 'scan;
            }
        }
        if n == 0 {
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// Homogenized support matrix of a circuit: first row all ones, columns
/// the n+1 simplex vertices followed by the inner point.
#[derive(Debug, Clone)]
pub struct SupportMatrix(RatMat);

impl SupportMatrix {
    pub fn from_circuit(f: &CircuitPoly) -> Self {
        SupportMatrix(f.support_matrix())
    }

    pub fn new(m: RatMat) -> Result<Self, GeomError> {
        if m.cols != m.rows + 1 {
            return Err(GeomError::BadShape(format!(
                "{}x{} is not (n+1)x(n+2)",
                m.rows, m.cols
            )));
        }
        for j in 0..m.cols {
            if m[(0, j)] != Rat::one() {
                return Err(GeomError::BadShape("first row must be all ones".into()));
            }
        }
        Ok(SupportMatrix(m))
    }

    pub fn matrix(&self) -> &RatMat {
        &self.0
    }
}

/// Primitive integer generator of the kernel, sign-normalized so the
/// inner-point entry (last column) is negative. Proportional to
/// (λ_0, ..., λ_n, -1).
pub fn gale_dual(m: &SupportMatrix) -> Result<Vec<BigInt>, GeomError> {
    let mat = m.matrix();
    if mat.rank() != mat.rows {
        return Err(GeomError::RankDeficient);
    }
    let mut v = mat.kernel_primitive().ok_or(GeomError::RankDeficient)?;
    let last = v.last().cloned().unwrap_or_else(BigInt::zero);
    if last.is_zero() {
        return Err(GeomError::RankDeficient);
    }
    if last.is_positive() {
        for x in &mut v {
            *x = -x.clone();
        }
    }
    Ok(v)
}

/// Data of a monomial change of coordinates `x -> x^T` between a circuit
/// polynomial and its (zero) standard form.
///
/// `anchor` is the vertex factored out before transforming, so that the
/// exact evaluation identity reads
/// `f(e^w) = e^{<anchor, w>} * image(e^{T^t w})` for the standard form and
/// `f(e^w) = e^{<inner, w>} * image(e^{T^t w})` for the zero standard form.
#[derive(Debug, Clone)]
pub struct TransformData {
    pub t: RatMat,
    pub mu: BigInt,
    pub image: SparsePoly,
    pub anchor: Exponent,
}

/// Non-anchor vertices ordered lexicographically descending; this pairs
/// the j-th axis with the j-th vertex and yields the identity transform
/// on inputs that are already in standard form.
fn transform_vertex_order(f: &CircuitPoly) -> (usize, Vec<usize>) {
    let verts = f.vertices();
    let anchor_idx = 0; // graded-lex minimum
    let mut rest: Vec<usize> = (1..verts.len()).collect();
    rest.sort_by(|&a, &b| verts[b].0.cmp(&verts[a].0));
    (anchor_idx, rest)
}

/// Standard form: vertices map to μ·e_j, the inner point to
/// μ·(λ_1, ..., λ_n), coefficients unchanged.
pub fn standard_form(f: &CircuitPoly) -> TransformData {
    let n = f.dimension();
    let (a_idx, rest) = transform_vertex_order(f);
    let anchor = f.vertices()[a_idx].clone();
    let mu = f.mu().clone();
    let mu_rat = Rat::from_integer(mu.clone());

    // T columns: (α(j) - anchor) / μ
    let mut t = RatMat::zeros(n, n);
    for (j, &vi) in rest.iter().enumerate() {
        let col = f.vertices()[vi].sub(&anchor);
        for i in 0..n {
            t[(i, j)] = Rat::from_integer(col.0[i].into()) / mu_rat.clone();
        }
    }
    debug_assert!(t.inverse().is_some());

    let mut terms: Vec<(Exponent, Rat)> = Vec::with_capacity(n + 2);
    terms.push((Exponent::zero(n), f.b()[a_idx].clone()));
    for (j, &vi) in rest.iter().enumerate() {
        let mut e = vec![0i64; n];
        e[j] = mu.to_i64().expect("mu fits in i64 for supported inputs");
        terms.push((Exponent(e), f.b()[vi].clone()));
    }
    let inner_img: Vec<i64> = rest
        .iter()
        .map(|&vi| {
            let v = &f.lambdas()[vi] * &mu_rat;
            debug_assert!(v.denom().is_one());
            v.numer().to_i64().expect("μλ fits in i64")
        })
        .collect();
    terms.push((Exponent(inner_img), f.c().clone()));
    let image = SparsePoly::new(n, terms).expect("standard form image is nonempty");

    TransformData {
        t,
        mu,
        image,
        anchor,
    }
}

/// Zero standard form: the inner point maps to the origin and the image
/// is a Laurent polynomial with a vertex at `-(μ/λ_0)·(λ_1, ..., λ_n)`.
/// μ is enlarged to the smallest multiple making that vertex integral.
pub fn zero_standard_form(f: &CircuitPoly) -> TransformData {
    let n = f.dimension();
    let (a_idx, rest) = transform_vertex_order(f);
    let lam0 = &f.lambdas()[a_idx];

    // smallest multiple of μ with μ λ_j / λ_0 integral for all j
    let mut mu = f.mu().clone();
    loop {
        let ok = rest.iter().all(|&vi| {
            let v = &f.lambdas()[vi] * Rat::from_integer(mu.clone()) / lam0;
            v.denom().is_one()
        });
        if ok {
            break;
        }
        mu += f.mu();
    }
    let mu_rat = Rat::from_integer(mu.clone());

    let mut t = RatMat::zeros(n, n);
    for (j, &vi) in rest.iter().enumerate() {
        let col = f.vertices()[vi].sub(f.inner());
        for i in 0..n {
            t[(i, j)] = Rat::from_integer(col.0[i].into()) / mu_rat.clone();
        }
    }
    debug_assert!(t.inverse().is_some());

    let mut terms: Vec<(Exponent, Rat)> = Vec::with_capacity(n + 2);
    terms.push((Exponent::zero(n), f.c().clone()));
    for (j, &vi) in rest.iter().enumerate() {
        let mut e = vec![0i64; n];
        e[j] = mu.to_i64().expect("mu fits in i64 for supported inputs");
        terms.push((Exponent(e), f.b()[vi].clone()));
    }
    let anchor_img: Vec<i64> = rest
        .iter()
        .map(|&vi| {
            let v = -(&f.lambdas()[vi] * &mu_rat / lam0);
            debug_assert!(v.denom().is_one());
            v.numer().to_i64().expect("μλ/λ0 fits in i64")
        })
        .collect();
    terms.push((Exponent(anchor_img), f.b()[a_idx].clone()));
    let image = SparsePoly::new(n, terms).expect("zero standard form image is nonempty");

    TransformData {
        t,
        mu,
        image,
        anchor: f.inner().clone(),
    }
}

/// Standard form for a simplex polynomial with several interior points.
/// μ is the lcm of all barycentric denominators and 2, so the image has
/// even vertices.
pub fn standard_form_general(p: &SparsePoly) -> Result<TransformData, GeomError> {
    let n = p.dimension();
    let exps: Vec<Exponent> = p.exponents().cloned().collect();

    // vertex set = points not in the hull of the others
    let mut vertices: Vec<Exponent> = Vec::new();
    let mut interior: Vec<Exponent> = Vec::new();
    for e in &exps {
        let others: Vec<Exponent> = exps.iter().filter(|x| *x != e).cloned().collect();
        if in_convex_hull(&others, e) {
            interior.push(e.clone());
        } else {
            vertices.push(e.clone());
        }
    }
    if vertices.len() != n + 1 {
        return Err(GeomError::NotSimplexSupport(format!(
            "{} hull vertices for dimension {}",
            vertices.len(),
            n
        )));
    }
    vertices.sort();
    let anchor = vertices[0].clone();
    let mut rest: Vec<Exponent> = vertices[1..].to_vec();
    rest.sort_by(|a, b| b.0.cmp(&a.0));

    let ordered: Vec<Exponent> = std::iter::once(anchor.clone()).chain(rest.clone()).collect();
    let lams: Vec<Vec<Rat>> = interior
        .iter()
        .map(|y| barycentric(&ordered, y))
        .collect::<Result<_, _>>()?;

    let mut mu = BigInt::from(2);
    for lam in &lams {
        for l in lam {
            mu = mu.lcm(l.denom());
        }
    }
    let mu_rat = Rat::from_integer(mu.clone());

    let mut t = RatMat::zeros(n, n);
    for (j, v) in rest.iter().enumerate() {
        let col = v.sub(&anchor);
        for i in 0..n {
            t[(i, j)] = Rat::from_integer(col.0[i].into()) / mu_rat.clone();
        }
    }
    if t.inverse().is_none() {
        return Err(GeomError::DegenerateSimplex);
    }

    let mut terms: Vec<(Exponent, Rat)> = Vec::new();
    terms.push((Exponent::zero(n), p.coeff(&anchor).unwrap().clone()));
    for (j, v) in rest.iter().enumerate() {
        let mut e = vec![0i64; n];
        e[j] = mu.to_i64().expect("mu fits in i64");
        terms.push((Exponent(e), p.coeff(v).unwrap().clone()));
    }
    for (y, lam) in interior.iter().zip(&lams) {
        let img: Vec<i64> = (1..=n)
            .map(|j| {
                let v = &lam[j] * &mu_rat;
                debug_assert!(v.denom().is_one());
                v.numer().to_i64().expect("μλ fits in i64")
            })
            .collect();
        terms.push((Exponent(img), p.coeff(y).unwrap().clone()));
    }
    let image = SparsePoly::new(n, terms)?;

    Ok(TransformData {
        t,
        mu,
        image,
        anchor,
    })
}

/// Exact convex-hull membership against an arbitrary point set, by
/// testing whether the point admits any convex combination (small LP
/// solved by enumeration of affinely independent subsets is overkill
/// here; we use the direct feasibility test via barycentric coordinates
/// over a spanning subset when the set is a simplex, and fall back to a
/// Fourier-Motzkin-free rational LP for general sets).
pub fn in_convex_hull(points: &[Exponent], target: &Exponent) -> bool {
    // Feasibility of: Σ λ_i p_i = target, Σ λ_i = 1, λ ≥ 0.
    // Desk-scale exact simplex method on the standard-form LP.
    feasible_convex_combination(points, target)
}

fn feasible_convex_combination(points: &[Exponent], target: &Exponent) -> bool {
    let n = target.len();
    let m = points.len();
    if m == 0 {
        return false;
    }
    // Phase-1 simplex with artificial variables, exact rational pivoting.
    // Constraint matrix rows: [1, ..., 1 | I] λ,a = [1; target-ish]  —
    // we homogenize: rows 0..n are coordinates, row n is Σλ = 1.
    let rows = n + 1;
    let cols = m + rows; // λ variables + artificials
    let mut a = RatMat::zeros(rows, cols);
    let mut rhs: Vec<Rat> = Vec::with_capacity(rows);
    for i in 0..n {
        for (j, p) in points.iter().enumerate() {
            a[(i, j)] = Rat::from_integer(p.0[i].into());
        }
        rhs.push(Rat::from_integer(target.0[i].into()));
    }
    for j in 0..m {
        a[(n, j)] = Rat::one();
    }
    rhs.push(Rat::one());
    // make rhs nonnegative
    for i in 0..rows {
        if rhs[i].is_negative() {
            rhs[i] = -rhs[i].clone();
            for j in 0..m {
                a[(i, j)] = -a[(i, j)].clone();
            }
        }
        a[(i, m + i)] = Rat::one();
    }
    // objective: minimize Σ artificials
    let mut basis: Vec<usize> = (m..cols).collect();
    let mut tableau = a;
    let mut b = rhs;
    loop {
        // reduced costs for phase-1 objective
        let mut enter = None;
        for j in 0..m {
            // cost_j = -Σ_{i in basis artificial rows} tableau[i][j]
            let mut red = Rat::zero();
            for (i, &bi) in basis.iter().enumerate() {
                if bi >= m {
                    red -= tableau[(i, j)].clone();
                }
            }
            if red.is_negative() {
                enter = Some(j);
                break; // Bland's rule
            }
        }
        let Some(j) = enter else { break };
        // ratio test
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..rows {
            if tableau[(i, j)].is_positive() {
                let ratio = &b[i] / &tableau[(i, j)];
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && basis[i] < basis[*li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            return false; // unbounded phase-1 cannot happen; treat as infeasible
        };
        // pivot
        let piv = tableau[(pivot_row, j)].clone();
        for jj in 0..cols {
            let v = &tableau[(pivot_row, jj)] / &piv;
            tableau[(pivot_row, jj)] = v;
        }
        b[pivot_row] = &b[pivot_row] / &piv;
        for i in 0..rows {
            if i != pivot_row && !tableau[(i, j)].is_zero() {
                let f = tableau[(i, j)].clone();
                for jj in 0..cols {
                    let v = &tableau[(i, jj)] - &f * &tableau[(pivot_row, jj)];
                    tableau[(i, jj)] = v;
                }
                let v = &b[i] - &f * &b[pivot_row];
                b[i] = v;
            }
        }
        basis[pivot_row] = j;
    }
    // feasible iff all artificial basic variables are zero
    basis
        .iter()
        .enumerate()
        .all(|(i, &bi)| bi < m || b[i].is_zero())
}
