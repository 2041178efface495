//! Shared generators and oracles for the integration suites.

use circuit_cert::circuit::{validate_circuit, CircuitCheck, CircuitPoly};
use circuit_cert::lattice::{barycentric, enumerate_lattice_points};
use circuit_cert::poly::{Exponent, SparsePoly};
use circuit_cert::scalar::{rat, Rat};
use num_traits::Signed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn exp(v: &[i64]) -> Exponent {
    Exponent(v.to_vec())
}

/// Random even nondegenerate simplex with vertices in [0, max_coord]^n.
pub fn random_even_simplex(rng: &mut ChaCha8Rng, n: usize, max_coord: i64) -> Vec<Exponent> {
    loop {
        let mut verts: Vec<Exponent> = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            let v: Vec<i64> = (0..n).map(|_| 2 * rng.gen_range(0..=max_coord / 2)).collect();
            verts.push(Exponent(v));
        }
        verts.sort();
        verts.dedup();
        if verts.len() != n + 1 {
            continue;
        }
        // affine independence via a barycentric solve against any point
        if barycentric(&verts, &verts[0]).is_ok() {
            return verts;
        }
    }
}

/// Random circuit polynomial: even simplex, strictly interior lattice
/// point, positive rational vertex coefficients with numerators and
/// denominators ≤ 20, inner coefficient of either sign. Returns the
/// polynomial and its validated form.
pub fn random_circuit(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_coord: i64,
) -> Option<(SparsePoly, CircuitPoly)> {
    let verts = random_even_simplex(rng, n, max_coord);
    let points = enumerate_lattice_points(&verts).ok()?;
    let interior: Vec<&Exponent> = points
        .iter()
        .filter(|p| {
            let lam = barycentric(&verts, p).unwrap();
            lam.iter().all(|l| l.is_positive())
        })
        .collect();
    if interior.is_empty() {
        return None;
    }
    let y = interior[rng.gen_range(0..interior.len())].clone();

    let mut terms: Vec<(Exponent, Rat)> = Vec::with_capacity(n + 2);
    for v in &verts {
        let b = rat(rng.gen_range(1..=20), rng.gen_range(1..=20));
        terms.push((v.clone(), b));
    }
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let c = rat(sign * rng.gen_range(1..=20), rng.gen_range(1..=20));
    terms.push((y, c));
    let p = SparsePoly::new(n, terms).ok()?;
    match validate_circuit(&p).ok()? {
        CircuitCheck::Circuit(f) => Some((p, f)),
        _ => None,
    }
}

/// Scaled agiform on the given simplex and inner point: b_j = t·λ_j and
/// c = -s·t with 0 < s ≤ 1, hence nonnegative with circuit number t.
pub fn scaled_agiform(
    verts: &[Exponent],
    y: &Exponent,
    t: &Rat,
    depth: &Rat,
) -> Option<SparsePoly> {
    let lam = barycentric(verts, y).ok()?;
    if lam.iter().any(|l| !l.is_positive()) {
        return None;
    }
    let n = y.len();
    let mut terms: Vec<(Exponent, Rat)> = verts
        .iter()
        .zip(&lam)
        .map(|(v, l)| (v.clone(), l * t))
        .collect();
    terms.push((y.clone(), -(depth * t)));
    SparsePoly::new(n, terms).ok()
}

/// Grid minimum of f over [-3,3]^n with 41 points per axis, relative to
/// a per-point magnitude scale.
pub fn grid_min_relative(p: &SparsePoly) -> f64 {
    let n = p.dimension();
    let steps = 41usize;
    let coord = |i: usize| -3.0 + 6.0 * i as f64 / (steps - 1) as f64;
    let mut idx = vec![0usize; n];
    let mut best = f64::INFINITY;
    loop {
        let x: Vec<f64> = idx.iter().map(|&i| coord(i)).collect();
        let mut scale = 1.0;
        for (e, c) in p.terms() {
            let mut m = circuit_cert::scalar::rat_to_f64(c).abs();
            for (xi, ei) in x.iter().zip(&e.0) {
                m *= xi.abs().powi(*ei as i32);
            }
            scale += m;
        }
        let v = p.eval_f64(&x) / scale;
        if v < best {
            best = v;
        }
        let mut k = n;
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < steps {
                break;
            }
            idx[k] = 0;
        }
    }
}
