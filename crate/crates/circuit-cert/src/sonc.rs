//! Certificates as sums of nonnegative circuit polynomials.
//!
//! For a simplex-supported polynomial with even vertices, positive vertex
//! coefficients and negative inner coefficients, nonnegativity is
//! equivalent to decomposability into one nonnegative circuit polynomial
//! per inner point. The decomposition is constructed at a global
//! minimizer v of f on the positive orthant: each vertex coefficient is
//! split proportionally to the inner terms' pull at v,
//! `b_{i,k} = a_i λ_k^{(i)} v^{y(i)} / v^{α(k)}`, and the constant term is
//! split so that every piece clears its circuit-number threshold. A
//! piece with constant share c_i is nonnegative iff
//! `c_i ≥ λ_0^{(i)} a_i v^{y(i)}`, and the sum of those lower bounds is
//! exactly `b_0 - f(v)` at a critical point, so a valid split of b_0
//! exists precisely when f(v) ≥ 0; the remaining slack is distributed
//! proportionally.
//!
//! Mixed inner signs are first normalized by a variable sign flip found
//! over GF(2); monomial-square inner terms are split off as their own
//! pieces and ignored by the flip.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::certify::{theta_relation, CertifyError, Cmp};
use crate::jsonio::{self, CertificateJson, JsonIoError};
use crate::lattice::{barycentric, in_convex_hull, GeomError};
use crate::linalg::solve_gf2;
use crate::poly::{Exponent, PolyError, SparsePoly};
use crate::scalar::{rat_from_f64, rat_to_f64, Rat};

#[derive(Debug, Error)]
pub enum SoncError {
    #[error("support must be a simplex with interior points: {0}")]
    NotSimplexSupport(String),
    #[error("the Newton polytope must have even vertices; {0} is odd")]
    OddVertex(String),
    #[error("vertex coefficient of {0} must be positive")]
    NonPositiveVertexCoefficient(String),
    #[error("the support must contain the origin (constant term)")]
    MissingConstantTerm,
    #[error("inner term {0} must have a negative coefficient; run the orthant flip first")]
    InnerNotNegative(String),
    #[error("inner point {0} lies on the simplex boundary")]
    InnerOnBoundary(String),
    #[error("polynomial has no inner terms to decompose")]
    NoInnerTerms,
    #[error("minimizer search did not converge; retry with more starts")]
    NonConvergence,
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Json(#[from] JsonIoError),
}

#[derive(Debug, Clone)]
pub struct MinimizerResult {
    /// Strictly positive minimizer of f on the open orthant.
    pub v: Vec<f64>,
    pub grad_norm: f64,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct CertPiece {
    pub weight: Rat,
    pub poly: SparsePoly,
}

#[derive(Debug, Clone)]
pub struct SoncCertificate {
    pub pieces: Vec<CertPiece>,
    pub target: SparsePoly,
    /// Largest relative coefficient mismatch between Σ weight·piece and
    /// the target; zero when the minimizer snapped to an exact rational
    /// critical point.
    pub residual_norm: f64,
}

#[derive(Debug, Clone)]
pub enum SoncOutcome {
    Certificate(SoncCertificate),
    /// The input is negative at the minimizer; it is not SONC because it
    /// is not even nonnegative.
    NotSonc { witness: Vec<f64>, value: f64 },
}

/// Parsed multi-inner simplex structure: origin anchor, n further even
/// vertices, inner points with magnitudes a_i = -coeff and barycentric
/// rows λ^{(i)}.
struct MultiInner {
    verts: Vec<Exponent>,
    b0: Rat,
    b: Vec<Rat>,
    inner: Vec<Exponent>,
    a: Vec<Rat>,
    lams: Vec<Vec<Rat>>,
}

fn parse_multi_inner(
    p: &SparsePoly,
    require_negative_inner: bool,
) -> Result<MultiInner, SoncError> {
    let n = p.dimension();
    let exps: Vec<Exponent> = p.exponents().cloned().collect();
    let mut verts = Vec::new();
    let mut inner = Vec::new();
    for e in &exps {
        let others: Vec<Exponent> = exps.iter().filter(|x| *x != e).cloned().collect();
        if in_convex_hull(&others, e) {
            inner.push(e.clone());
        } else {
            verts.push(e.clone());
        }
    }
    if verts.len() != n + 1 {
        return Err(SoncError::NotSimplexSupport(format!(
            "{} hull vertices in dimension {}",
            verts.len(),
            n
        )));
    }
    verts.sort();
    if !verts[0].is_zero() {
        return Err(SoncError::MissingConstantTerm);
    }
    for v in &verts {
        if !v.is_even() {
            return Err(SoncError::OddVertex(v.to_string()));
        }
        if !p.coeff(v).unwrap().is_positive() {
            return Err(SoncError::NonPositiveVertexCoefficient(v.to_string()));
        }
    }
    if inner.is_empty() {
        return Err(SoncError::NoInnerTerms);
    }
    inner.sort();
    let mut a = Vec::with_capacity(inner.len());
    let mut lams = Vec::with_capacity(inner.len());
    for y in &inner {
        let cy = p.coeff(y).unwrap();
        if require_negative_inner && !cy.is_negative() {
            return Err(SoncError::InnerNotNegative(y.to_string()));
        }
        a.push(-cy.clone());
        let lam = barycentric(&verts, y)?;
        if lam.iter().any(|l| !l.is_positive()) {
            return Err(SoncError::InnerOnBoundary(y.to_string()));
        }
        lams.push(lam);
    }
    let b0 = p.coeff(&verts[0]).unwrap().clone();
    let b: Vec<Rat> = verts[1..]
        .iter()
        .map(|v| p.coeff(v).unwrap().clone())
        .collect();
    Ok(MultiInner {
        verts,
        b0,
        b,
        inner,
        a,
        lams,
    })
}

/// Returns (g(w), vertex term values, inner term magnitudes) for
/// g(w) = f(e^w).
fn eval_exp_terms(st: &MultiInner, w: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
    let dot = |e: &Exponent| -> f64 { e.0.iter().zip(w).map(|(&x, wi)| x as f64 * wi).sum() };
    let vvals: Vec<f64> = st.verts[1..]
        .iter()
        .zip(&st.b)
        .map(|(e, b)| rat_to_f64(b) * dot(e).exp())
        .collect();
    let svals: Vec<f64> = st
        .inner
        .iter()
        .zip(&st.a)
        .map(|(e, a)| rat_to_f64(a) * dot(e).exp())
        .collect();
    let g = rat_to_f64(&st.b0) + vvals.iter().sum::<f64>() - svals.iter().sum::<f64>();
    (g, vvals, svals)
}

fn gradient(st: &MultiInner, w: &[f64]) -> Vec<f64> {
    let n = w.len();
    let (_, vvals, svals) = eval_exp_terms(st, w);
    let mut grad = vec![0.0; n];
    for (e, val) in st.verts[1..].iter().zip(&vvals) {
        for i in 0..n {
            grad[i] += e.0[i] as f64 * val;
        }
    }
    for (e, val) in st.inner.iter().zip(&svals) {
        for i in 0..n {
            grad[i] -= e.0[i] as f64 * val;
        }
    }
    grad
}

fn hessian(st: &MultiInner, w: &[f64]) -> Vec<Vec<f64>> {
    let n = w.len();
    let (_, vvals, svals) = eval_exp_terms(st, w);
    let mut h = vec![vec![0.0; n]; n];
    for (e, val) in st.verts[1..].iter().zip(&vvals) {
        for i in 0..n {
            for j in 0..n {
                h[i][j] += e.0[i] as f64 * e.0[j] as f64 * val;
            }
        }
    }
    for (e, val) in st.inner.iter().zip(&svals) {
        for i in 0..n {
            for j in 0..n {
                h[i][j] -= e.0[i] as f64 * e.0[j] as f64 * val;
            }
        }
    }
    h
}

fn solve_dense_f64(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
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

/// Minimizes f(e^w) by damped Newton with a trust region, multi-start
/// (origin plus 8 seeded random starts in [-2, 2]^n). Tie-breaking is by
/// objective value then start index, so the result is deterministic.
pub fn find_positive_minimizer(p: &SparsePoly) -> Result<MinimizerResult, SoncError> {
    let st = parse_multi_inner(p, true)?;
    Ok(minimize(&st))
}

fn minimize(st: &MultiInner) -> MinimizerResult {
    let n = st.verts[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c19c);
    let mut starts = vec![vec![0.0; n]];
    for _ in 0..8 {
        starts.push((0..n).map(|_| rng.gen_range(-2.0..2.0)).collect());
    }

    let mut best: Option<(f64, Vec<f64>, f64, bool)> = None;
    for w0 in starts {
        let (w, gnorm, conv) = newton_descent(st, w0);
        let (val, _, _) = eval_exp_terms(st, &w);
        let better = match &best {
            None => true,
            Some((bv, _, _, _)) => val < *bv - 1e-15,
        };
        if better {
            best = Some((val, w, gnorm, conv));
        }
    }
    let (_, w, gnorm, conv) = best.expect("at least one start");
    MinimizerResult {
        v: w.iter().map(|x| x.exp()).collect(),
        grad_norm: gnorm,
        converged: conv,
    }
}

fn newton_descent(st: &MultiInner, mut w: Vec<f64>) -> (Vec<f64>, f64, bool) {
    let mut converged = false;
    let mut gnorm = f64::INFINITY;
    for _ in 0..300 {
        let (val, vvals, svals) = eval_exp_terms(st, &w);
        let scale = rat_to_f64(&st.b0)
            + vvals.iter().sum::<f64>()
            + svals.iter().map(|s| s.abs()).sum::<f64>();
        let grad = gradient(st, &w);
        gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm <= 1e-10 * scale {
            converged = true;
            break;
        }
        let h = hessian(st, &w);
        let neg_grad: Vec<f64> = grad.iter().map(|g| -g).collect();
        let mut dir = solve_dense_f64(&h, &neg_grad).unwrap_or_else(|| neg_grad.clone());
        let descent: f64 = dir.iter().zip(&grad).map(|(d, g)| d * g).sum();
        if descent >= 0.0 {
            dir = neg_grad;
        }
        // trust region on the step length
        let dmax = dir.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        if dmax > 1.5 {
            for d in &mut dir {
                *d *= 1.5 / dmax;
            }
        }
        let mut t = 1.0;
        let mut improved = false;
        for ls in 0..50 {
            let cand: Vec<f64> = w.iter().zip(&dir).map(|(wi, d)| wi + t * d).collect();
            let (cv, _, _) = eval_exp_terms(st, &cand);
            // near a touching minimum the objective is pure rounding
            // noise; accept a full Newton step that shrinks the gradient
            let grad_shrinks = ls == 0 && {
                let g = gradient(st, &cand);
                let gn: f64 = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                gn <= 0.9 * gnorm
            };
            if cv < val || grad_shrinks {
                w = cand;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (w, gnorm, converged)
}

/// Continued-fraction approximation with bounded denominator.
fn approx_rational(x: f64, max_den: u64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let mut x = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..64 {
        let a = x.floor();
        if a > i64::MAX as f64 / 2.0 {
            break;
        }
        let ai = a as i64;
        let p2 = ai.checked_mul(p1)?.checked_add(p0)?;
        let q2 = ai.checked_mul(q1)?.checked_add(q0)?;
        if q2 as u64 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = x - a;
        if frac < 1e-13 {
            break;
        }
        x = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let mut r = crate::scalar::rat(p1, q1);
    if neg {
        r = -r;
    }
    Some(r)
}

/// v^e for a strictly positive rational vector and a lattice exponent.
fn pow_vec(v: &[Rat], e: &Exponent) -> Rat {
    let mut acc = Rat::one();
    for (vi, &ei) in v.iter().zip(&e.0) {
        if ei >= 0 {
            acc *= crate::scalar::rat_pow(vi, ei as u64);
        } else {
            acc *= crate::scalar::rat_pow(&vi.recip(), ei.unsigned_abs());
        }
    }
    acc
}

/// Exact criticality test: the gradient of f(e^w) vanishes at v iff every
/// vertex coefficient equals the sum of its shares.
fn is_exact_critical(st: &MultiInner, v: &[Rat]) -> bool {
    for (k, vert) in st.verts[1..].iter().enumerate() {
        let mut share_sum = Rat::zero();
        let denom = pow_vec(v, vert);
        for (i, y) in st.inner.iter().enumerate() {
            share_sum += &st.a[i] * &st.lams[i][k + 1] * pow_vec(v, y) / &denom;
        }
        if share_sum != st.b[k] {
            return false;
        }
    }
    true
}

/// Decomposition into nonnegative circuit pieces, one per inner point,
/// evaluated at the global minimizer. Reports `NotSonc` with the witness
/// when the input is negative there.
pub fn decompose_multi_inner(p: &SparsePoly) -> Result<SoncOutcome, SoncError> {
    let st = parse_multi_inner(p, true)?;

    // single inner point: the polynomial is its own certificate
    if st.inner.len() == 1 {
        let (rel, _, _) = theta_relation(&st.lams[0], &full_b(&st), &st.a[0], 128);
        if rel == Cmp::Greater {
            let m = minimize(&st);
            let value = p.eval_f64(&m.v);
            return Ok(SoncOutcome::NotSonc { witness: m.v, value });
        }
        return Ok(SoncOutcome::Certificate(SoncCertificate {
            pieces: vec![CertPiece {
                weight: Rat::one(),
                poly: p.clone(),
            }],
            target: p.clone(),
            residual_norm: 0.0,
        }));
    }

    let m = minimize(&st);
    if !m.converged {
        return Err(SoncError::NonConvergence);
    }

    // snap the minimizer to small rationals when that hits an exact
    // critical point; otherwise use the exact dyadic value of the floats
    let mut v_rat: Option<Vec<Rat>> = None;
    if let Some(cand) = m
        .v
        .iter()
        .map(|&x| approx_rational(x, 64))
        .collect::<Option<Vec<Rat>>>()
    {
        if cand.iter().all(|r| r.is_positive()) && is_exact_critical(&st, &cand) {
            v_rat = Some(cand);
        }
    }
    let exact_mode = v_rat.is_some();
    let v_rat = match v_rat {
        Some(v) => v,
        None => m
            .v
            .iter()
            .map(|&x| rat_from_f64(x).filter(|r| r.is_positive()))
            .collect::<Option<Vec<Rat>>>()
            .ok_or(SoncError::NonConvergence)?,
    };

    // feasibility of the constant split: Σ λ_0^{(i)} a_i v^{y(i)} ≤ b_0,
    // with defect exactly f(v) at a critical point
    let m_low: Vec<Rat> = st
        .inner
        .iter()
        .enumerate()
        .map(|(i, y)| &st.lams[i][0] * &st.a[i] * pow_vec(&v_rat, y))
        .collect();
    let low_sum: Rat = m_low.iter().cloned().sum();
    if low_sum > st.b0 {
        let value = p.eval_rat(&v_rat);
        if value.is_negative() {
            return Ok(SoncOutcome::NotSonc {
                witness: v_rat.iter().map(rat_to_f64).collect(),
                value: rat_to_f64(&value),
            });
        }
        // f(v) ≥ 0 but the split is infeasible: the critical point was
        // not located accurately enough
        return Err(SoncError::NonConvergence);
    }
    let slack = &st.b0 - &low_sum;
    let lam0_sum: Rat = st.lams.iter().map(|l| l[0].clone()).sum();

    let n = p.dimension();
    let mut pieces = Vec::with_capacity(st.inner.len());
    let mut share_sums = vec![Rat::zero(); st.b.len()];
    for (i, y) in st.inner.iter().enumerate() {
        let vy = pow_vec(&v_rat, y);
        let c_i = &m_low[i] + &slack * &st.lams[i][0] / &lam0_sum;
        let mut terms: Vec<(Exponent, Rat)> = Vec::with_capacity(n + 2);
        terms.push((Exponent::zero(n), c_i.clone()));
        let mut piece_b = vec![c_i.clone()];
        for (k, vert) in st.verts[1..].iter().enumerate() {
            let share = &st.a[i] * &st.lams[i][k + 1] * &vy / pow_vec(&v_rat, vert);
            share_sums[k] += &share;
            terms.push((vert.clone(), share.clone()));
            piece_b.push(share);
        }
        terms.push((y.clone(), -st.a[i].clone()));
        // piece nonnegativity holds by construction of c_i; verify anyway
        let (rel, _, _) = theta_relation(&st.lams[i], &piece_b, &st.a[i], 128);
        debug_assert_ne!(rel, Cmp::Greater, "constant split guarantees nonnegativity");
        if rel == Cmp::Greater {
            return Err(SoncError::NonConvergence);
        }
        pieces.push(CertPiece {
            weight: Rat::one(),
            poly: SparsePoly::new(n, terms)?,
        });
    }

    let mut residual = 0.0f64;
    for (k, s) in share_sums.iter().enumerate() {
        let d = rat_to_f64(&(s - &st.b[k])).abs();
        let rel = d / rat_to_f64(&st.b[k]).abs().max(1.0);
        residual = residual.max(rel);
    }
    if residual > 1e-8 {
        return Err(SoncError::NonConvergence);
    }
    if exact_mode {
        debug_assert_eq!(residual, 0.0);
    }

    Ok(SoncOutcome::Certificate(SoncCertificate {
        pieces,
        target: p.clone(),
        residual_norm: residual,
    }))
}

fn full_b(st: &MultiInner) -> Vec<Rat> {
    let mut b = vec![st.b0.clone()];
    b.extend(st.b.iter().cloned());
    b
}

/// Searches for a sign vector σ ∈ {±1}^n making every constrained inner
/// term negative, by solving Σ_j y(i)_j t_j ≡ r_i (mod 2) with r_i = 1
/// for positive coefficients. Monomial-square inner terms (even exponent,
/// positive coefficient) impose no constraint. Returns the canonical
/// solution (free variables +1) or `None` when the system is
/// inconsistent.
pub fn orthant_flip_search(p: &SparsePoly) -> Result<Option<Vec<i8>>, SoncError> {
    let st = parse_multi_inner(p, false)?;
    let n = p.dimension();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (i, y) in st.inner.iter().enumerate() {
        let coeff_positive = !st.a[i].is_positive(); // a_i = -coeff
        if y.is_even() && coeff_positive {
            continue; // monomial square, ignored
        }
        rows.push(y.0.iter().map(|e| e % 2 != 0).collect::<Vec<bool>>());
        rhs.push(coeff_positive);
    }
    if rows.is_empty() {
        return Ok(Some(vec![1; n]));
    }
    Ok(solve_gf2(&rows, &rhs).map(|t| t.iter().map(|&b| if b { -1 } else { 1 }).collect()))
}

/// Variable sign flip x_j -> σ_j x_j.
pub fn flip_signs(p: &SparsePoly, sigma: &[i8]) -> SparsePoly {
    let terms = p.terms().map(|(e, c)| {
        let mut neg = false;
        for (s, &k) in sigma.iter().zip(&e.0) {
            if *s < 0 && k % 2 != 0 {
                neg = !neg;
            }
        }
        (e.clone(), if neg { -c.clone() } else { c.clone() })
    });
    SparsePoly::new(p.dimension(), terms).expect("sign flip preserves the support")
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub valid: bool,
    pub failures: Vec<String>,
}

/// Re-validates a certificate with no other state: exact coefficient
/// re-summation against the target (tolerance 1e-8 relative, zero
/// mismatch for exact certificates) and a nonnegativity check of every
/// piece through the exact circuit decision.
pub fn verify_certificate(cert: &SoncCertificate) -> VerifyReport {
    let mut failures = Vec::new();

    for (idx, piece) in cert.pieces.iter().enumerate() {
        if piece.weight.is_negative() {
            failures.push(format!("piece {idx}: negative weight"));
            continue;
        }
        match crate::certify::certify_sparse(&piece.poly, 128) {
            Ok(v) => {
                if v.status == crate::certify::NonnegStatus::NotNonnegative {
                    failures.push(format!("piece {idx}: not nonnegative"));
                }
            }
            Err(e) => failures.push(format!("piece {idx}: {e}")),
        }
    }

    // exact re-summation
    let n = cert.target.dimension();
    let mut sum: Option<SparsePoly> = None;
    for piece in &cert.pieces {
        if piece.poly.dimension() != n {
            failures.push("piece dimension differs from target".into());
            continue;
        }
        if piece.weight.is_zero() {
            continue;
        }
        let scaled = match piece.poly.scale(&piece.weight) {
            Ok(s) => s,
            Err(e) => {
                failures.push(e.to_string());
                continue;
            }
        };
        let next = match sum.take() {
            None => Some(scaled),
            Some(acc) => match acc.add_scaled(&scaled, &Rat::one()) {
                Ok(s) => Some(s),
                Err(PolyError::Empty) => {
                    failures.push("piece sum cancelled to zero".into());
                    None
                }
                Err(e) => {
                    failures.push(e.to_string());
                    None
                }
            },
        };
        match next {
            Some(s) => sum = Some(s),
            None => break,
        }
    }
    match sum {
        None => failures.push("certificate has no pieces".into()),
        Some(total) => {
            let tol = Rat::new(1.into(), 100_000_000.into());
            let exponents: std::collections::BTreeSet<Exponent> = total
                .exponents()
                .chain(cert.target.exponents())
                .cloned()
                .collect();
            for e in exponents {
                let got = total.coeff(&e).cloned().unwrap_or_else(Rat::zero);
                let want = cert.target.coeff(&e).cloned().unwrap_or_else(Rat::zero);
                let err = (&got - &want).abs();
                let bound = &tol * want.abs().max(Rat::one());
                if err > bound {
                    failures.push(format!(
                        "coefficient mismatch at {e}: certificate sums to {}, target has {}",
                        crate::scalar::rat_to_string(&got),
                        crate::scalar::rat_to_string(&want)
                    ));
                }
            }
        }
    }

    VerifyReport {
        valid: failures.is_empty(),
        failures,
    }
}

/// JSON-level verification: also handles the degenerate empty certificate
/// (no pieces, zero target) which has no in-memory polynomial form.
pub fn verify_certificate_json(cert: &CertificateJson) -> Result<VerifyReport, SoncError> {
    if cert.pieces.is_empty() && cert.target.terms.is_empty() {
        return Ok(VerifyReport {
            valid: true,
            failures: Vec::new(),
        });
    }
    if cert.target.terms.is_empty() {
        return Ok(VerifyReport {
            valid: false,
            failures: vec!["zero target with nonempty pieces".into()],
        });
    }
    let target = jsonio::poly_from_json(&cert.target)?;
    let mut pieces = Vec::with_capacity(cert.pieces.len());
    for p in &cert.pieces {
        let weight = crate::scalar::parse_rat(&p.weight)
            .map_err(|_| JsonIoError::BadWeight(p.weight.clone()))?;
        pieces.push(CertPiece {
            weight,
            poly: jsonio::poly_from_json(&p.poly)?,
        });
    }
    Ok(verify_certificate(&SoncCertificate {
        pieces,
        target,
        residual_norm: cert.residual_norm,
    }))
}

pub fn certificate_to_json(cert: &SoncCertificate) -> CertificateJson {
    CertificateJson {
        target: jsonio::poly_to_json(&cert.target),
        pieces: cert
            .pieces
            .iter()
            .map(|p| jsonio::PieceJson {
                weight: crate::scalar::rat_to_string(&p.weight),
                poly: jsonio::poly_to_json(&p.poly),
            })
            .collect(),
        residual_norm: cert.residual_norm,
    }
}

#[derive(Debug, Clone)]
pub enum SoncPipeline {
    Certificate(SoncCertificate),
    NotSonc {
        witness: Vec<f64>,
        value: f64,
    },
    /// Synthesis is out of reach: no orthant makes all constrained inner
    /// terms negative, or the residual polynomial after removing monomial
    /// squares is negative although the input is not.
    Unknown {
        reason: String,
    },
}

/// Full synthesis pipeline: split off monomial-square inner terms, flip
/// variables into an all-negative-inner orthant, decompose, flip back.
pub fn certify_sonc(p: &SparsePoly) -> Result<SoncPipeline, SoncError> {
    let st = match parse_multi_inner(p, false) {
        Ok(st) => st,
        Err(SoncError::NoInnerTerms) => {
            // pure sum of monomial squares: each term is a piece
            let pieces = p
                .terms()
                .map(|(e, c)| {
                    Ok(CertPiece {
                        weight: Rat::one(),
                        poly: SparsePoly::new(p.dimension(), vec![(e.clone(), c.clone())])?,
                    })
                })
                .collect::<Result<Vec<_>, SoncError>>()?;
            return Ok(SoncPipeline::Certificate(SoncCertificate {
                pieces,
                target: p.clone(),
                residual_norm: 0.0,
            }));
        }
        Err(e) => return Err(e),
    };

    let Some(sigma) = orthant_flip_search(p)? else {
        return Ok(SoncPipeline::Unknown {
            reason: "no orthant makes all constrained inner terms negative".into(),
        });
    };
    let flipped = flip_signs(p, &sigma);

    // split monomial squares; the flip left them positive
    let mut square_pieces: Vec<CertPiece> = Vec::new();
    let mut rest_terms: Vec<(Exponent, Rat)> = Vec::new();
    for (e, c) in flipped.terms() {
        let is_vertex = st.verts.contains(e);
        if !is_vertex && e.is_even() && c.is_positive() {
            square_pieces.push(CertPiece {
                weight: Rat::one(),
                poly: SparsePoly::new(p.dimension(), vec![(e.clone(), c.clone())])?,
            });
        } else {
            rest_terms.push((e.clone(), c.clone()));
        }
    }
    let rest = SparsePoly::new(p.dimension(), rest_terms)?;

    match decompose_multi_inner(&rest)? {
        SoncOutcome::Certificate(cert) => {
            let mut pieces: Vec<CertPiece> = cert
                .pieces
                .into_iter()
                .map(|piece| CertPiece {
                    weight: piece.weight,
                    poly: flip_signs(&piece.poly, &sigma),
                })
                .collect();
            pieces.extend(square_pieces);
            let cert = SoncCertificate {
                pieces,
                target: p.clone(),
                residual_norm: cert.residual_norm,
            };
            let report = verify_certificate(&cert);
            if !report.valid {
                return Ok(SoncPipeline::Unknown {
                    reason: format!(
                        "synthesized certificate failed verification: {:?}",
                        report.failures
                    ),
                });
            }
            Ok(SoncPipeline::Certificate(cert))
        }
        SoncOutcome::NotSonc { witness, value } => {
            // witness lives in the flipped coordinates
            let w: Vec<f64> = witness
                .iter()
                .zip(&sigma)
                .map(|(x, &s)| x * s as f64)
                .collect();
            let full_value = p.eval_f64(&w);
            if full_value < 0.0 {
                Ok(SoncPipeline::NotSonc {
                    witness: w,
                    value: full_value,
                })
            } else {
                Ok(SoncPipeline::Unknown {
                    reason: format!(
                        "residual polynomial is negative ({value:.3e}) although the input is not; \
                         SONC synthesis via monomial-square splitting fails here"
                    ),
                })
            }
        }
    }
}
