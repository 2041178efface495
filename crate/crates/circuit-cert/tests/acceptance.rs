//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`). Every
//! tolerance is pinned here.

mod common;

use std::time::Instant;

use circuit_cert::amoeba::{self, Solidness};
use circuit_cert::certify::{self, Cmp, Exactness, NonnegStatus};
use circuit_cert::circuit::{validate_circuit, CircuitCheck, CircuitPoly};
use circuit_cert::convexity::{self, ConvexStatus};
use circuit_cert::lattice;
use circuit_cert::mediated::{self, SimplexClass, Sufficiency};
use circuit_cert::parse::parse_poly;
use circuit_cert::polygon::{self, PolygonSupport};
use circuit_cert::poly::{Exponent, SparsePoly};
use circuit_cert::scalar::{rat, rat_to_f64, Rat};
use circuit_cert::sonc::{self, CertPiece, SoncCertificate, SoncOutcome};
use common::{exp, grid_min_relative, random_circuit, scaled_agiform};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MOTZKIN: &str = "1 + x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2";
const FIG1: &str = "1 + x1^2*x2 + x1*x2^2 - 4*x1*x2";

fn circuit(src: &str) -> CircuitPoly {
    match validate_circuit(&parse_poly(src).unwrap()).unwrap() {
        CircuitCheck::Circuit(c) => c,
        other => panic!("expected a circuit, got {other:?}"),
    }
}

#[test]
fn criterion_1_motzkin_suite() {
    let t0 = Instant::now();
    let f = circuit(MOTZKIN);

    // Θ = 3, equality relation decided exactly
    let cmp = certify::compare_c_theta(&f);
    assert_eq!(cmp.relation, Cmp::Equal);
    assert_eq!(cmp.exactness, Exactness::Exact);
    assert!((certify::theta_f(&f) - 3.0).abs() <= 1e-12);

    // verdict Boundary with zeros exactly {(±1, ±1)}
    let v = certify::decide_nonnegativity(&f).unwrap();
    assert_eq!(v.status, NonnegStatus::Boundary);
    let zeros = v.zeros.unwrap();
    assert_eq!(zeros.len(), 4);
    let mut got: Vec<(i64, i64)> = zeros
        .iter()
        .map(|z| {
            assert!((z[0].abs() - 1.0).abs() <= 1e-8 && (z[1].abs() - 1.0).abs() <= 1e-8);
            (z[0].signum() as i64, z[1].signum() as i64)
        })
        .collect();
    got.sort();
    assert_eq!(got, vec![(-1, -1), (-1, 1), (1, -1), (1, 1)]);

    // standard form of (1/3)·Motzkin
    let third = circuit("1/3 + 1/3*x1^4*x2^2 + 1/3*x1^2*x2^4 - x1^2*x2^2");
    let sf = lattice::standard_form(&third);
    assert_eq!(
        sf.image,
        parse_poly("1/3 + 1/3*x1^3 + 1/3*x2^3 - x1*x2").unwrap()
    );
    assert_eq!(sf.t[(0, 0)], rat(4, 3));
    assert_eq!(sf.t[(0, 1)], rat(2, 3));
    assert_eq!(sf.t[(1, 0)], rat(2, 3));
    assert_eq!(sf.t[(1, 1)], rat(4, 3));

    // s* = (0,0)
    let nm = certify::norm_minimizer(&f);
    assert!(nm.s_star.iter().all(|s| s.abs() <= 1e-12));
    assert!(nm.residual <= 1e-10);

    // not SOS, amoeba solid, not convex
    assert!(!mediated::is_sos(&f).unwrap().is_sos);
    assert_eq!(amoeba::is_solid(&f).solid, Solidness::Solid);
    assert_eq!(
        convexity::is_convex(f.base()).unwrap().status,
        ConvexStatus::NotConvex
    );

    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "criterion 1 took {dt:?}");
    println!("PASS criterion 1: Motzkin suite ({dt:?})");
}

#[test]
fn criterion_2_second_worked_example() {
    let t0 = Instant::now();
    let f = circuit("1/4 + 2*x1^2*x2^4 + x1^4*x2^4 - 5/2*x1^2*x2^3");
    let theta = certify::theta_f(&f);
    assert!(
        (theta - 2.0 * 2f64.sqrt()).abs() <= 1e-12,
        "Θ = {theta}, expected 2√2"
    );
    let v = certify::decide_nonnegativity(&f).unwrap();
    assert_eq!(v.status, NonnegStatus::Nonnegative);
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "criterion 2 took {dt:?}");
    println!("PASS criterion 2: strictly positive example, Θ = 2√2 ({dt:?})");
}

#[test]
fn criterion_3_mediated_sets() {
    let t0 = Instant::now();

    let r = mediated::maximal_mediated_set(&[exp(&[0, 0]), exp(&[4, 2]), exp(&[2, 4])]).unwrap();
    assert_eq!(r.classification, SimplexClass::M);

    let r = mediated::maximal_mediated_set(&[exp(&[0, 0]), exp(&[6, 0]), exp(&[0, 6])]).unwrap();
    assert_eq!(r.classification, SimplexClass::H);
    assert_eq!(r.delta_star.len(), 28);

    let verts = [exp(&[0, 0]), exp(&[2, 4]), exp(&[10, 6])];
    let r = mediated::maximal_mediated_set(&verts).unwrap();
    assert_eq!(r.classification, SimplexClass::H);
    assert_eq!(
        mediated::h_simplex_sufficient_2d(&verts).unwrap(),
        Sufficiency::Inconclusive
    );

    // exhaustive-subset maximality oracle over every even 2D simplex with
    // vertices in [0,6]^2 and at most 12 lattice points (anchored at the
    // origin; classification is invariant under even translation)
    let mut checked = 0usize;
    let coords: Vec<Exponent> = (0..=3)
        .flat_map(|x| (0..=3).map(move |y| exp(&[2 * x, 2 * y])))
        .collect();
    for (i, v1) in coords.iter().enumerate() {
        for v2 in &coords[i + 1..] {
            let verts = vec![exp(&[0, 0]), v1.clone(), v2.clone()];
            let Ok(r) = mediated::maximal_mediated_set(&verts) else {
                continue; // degenerate
            };
            if r.all_points.len() > 12 {
                continue;
            }
            let vertex_set: std::collections::BTreeSet<Exponent> =
                verts.iter().cloned().collect();
            let free: Vec<&Exponent> = r
                .all_points
                .iter()
                .filter(|p| !vertex_set.contains(*p))
                .collect();
            let mut best: Option<std::collections::BTreeSet<Exponent>> = None;
            for mask in 0u32..(1 << free.len()) {
                let mut cand = vertex_set.clone();
                for (k, p) in free.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        cand.insert((*p).clone());
                    }
                }
                if is_mediated(&vertex_set, &cand) {
                    if best.as_ref().map_or(true, |b| cand.len() > b.len()) {
                        best = Some(cand);
                    }
                }
            }
            assert_eq!(best.unwrap(), r.delta_star, "vertices {verts:?}");
            checked += 1;
        }
    }
    assert!(checked >= 50, "only {checked} simplices in the oracle family");

    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 10.0, "criterion 3 took {dt:?}");
    println!("PASS criterion 3: mediated sets, {checked} oracle simplices ({dt:?})");
}

fn is_mediated(
    vertices: &std::collections::BTreeSet<Exponent>,
    l: &std::collections::BTreeSet<Exponent>,
) -> bool {
    let doubled: std::collections::BTreeSet<Vec<i64>> = l
        .iter()
        .filter(|p| p.is_even())
        .map(|p| p.0.clone())
        .collect();
    l.iter().all(|p| {
        if vertices.contains(p) {
            return true;
        }
        let twice: Vec<i64> = p.0.iter().map(|x| 2 * x).collect();
        doubled.iter().any(|s| {
            let t: Vec<i64> = twice.iter().zip(s).map(|(b, si)| b - si).collect();
            t != *s && doubled.contains(&t)
        })
    })
}

#[test]
fn criterion_4_multi_inner_decomposition() {
    let t0 = Instant::now();
    let p = parse_poly("1 + 1/2*x1^6 + 1/32*x2^4 - 1/2*x1*x2 - 1/2*x1^2*x2").unwrap();
    let SoncOutcome::Certificate(cert) = sonc::decompose_multi_inner(&p).unwrap() else {
        panic!("expected a certificate");
    };
    assert_eq!(cert.pieces.len(), 2);
    assert_eq!(cert.residual_norm, 0.0, "minimizer must snap to (1,2)");
    let expect = [
        parse_poly("7/12 + 1/6*x1^6 + 1/64*x2^4 - 1/2*x1*x2").unwrap(),
        parse_poly("5/12 + 1/3*x1^6 + 1/64*x2^4 - 1/2*x1^2*x2").unwrap(),
    ];
    for e in &expect {
        assert!(
            cert.pieces.iter().any(|pc| pc.poly == *e),
            "missing piece {e}"
        );
    }
    assert!(sonc::verify_certificate(&cert).valid);
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 2.0, "criterion 4 took {dt:?}");
    println!("PASS criterion 4: exact two-piece decomposition at v = (1,2) ({dt:?})");
}

#[test]
fn criterion_5_certificate_verification() {
    let t0 = Instant::now();
    let target =
        parse_poly("3 + 4*x2^4 + 6*x1^8 + x1^4*x2^4 - 3*x1*x2 + 5*x1^3*x2 + 2*x1^4*x2^2").unwrap();
    let mk = |srcs: [&str; 3]| SoncCertificate {
        pieces: srcs
            .iter()
            .map(|s| CertPiece {
                weight: Rat::one(),
                poly: parse_poly(s).unwrap(),
            })
            .collect(),
        target: target.clone(),
        residual_norm: 0.0,
    };
    let good = mk([
        "1 + 2*x1^8 + 2*x2^4 - 3*x1*x2",
        "1 + 3*x1^8 + 2*x2^4 + 5*x1^3*x2",
        "1 + x1^8 + x1^4*x2^4 + 2*x1^4*x2^2",
    ]);
    assert!(sonc::verify_certificate(&good).valid);
    let bad = mk([
        "1 + 2*x1^8 + 2*x2^4 - 3*x1*x2",
        "1 + 3*x1^8 + 2*x2^4 + 5*x1^3*x2",
        "1 + x1^8 + x1^4*x2^4 + 9/4*x1^4*x2^2", // one perturbed coefficient
    ]);
    assert!(!sonc::verify_certificate(&bad).valid);
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "criterion 5 took {dt:?}");
    println!("PASS criterion 5: certificate verify/tamper ({dt:?})");
}

#[test]
fn criterion_6_amoeba_suite() {
    let t0 = Instant::now();
    let p = parse_poly(FIG1).unwrap();
    let CircuitCheck::Circuit(f) =
        circuit_cert::circuit::validate_circuit_relaxed(&p).unwrap()
    else {
        panic!()
    };
    let report = amoeba::is_solid(&f);
    assert_eq!(report.solid, Solidness::NotSolid);
    assert!((report.theta_f - 3.0).abs() <= 1e-10);

    // 256² raster: exactly one connected bounded-complement region
    let grid = amoeba::raster(&f, [-3.0, -3.0], [3.0, 3.0], 256).unwrap();
    assert_eq!(amoeba::bounded_component_count(&grid), 1);

    // Motzkin raster has none
    let m = circuit(MOTZKIN);
    let grid = amoeba::raster(&m, [-3.0, -3.0], [3.0, 3.0], 256).unwrap();
    assert_eq!(amoeba::bounded_component_count(&grid), 0);

    // grid minimum of Θ_w within 1e-6 relative of Θ_f, attained near s*
    for f in [&m, &f] {
        let theta_f = certify::theta_f(f);
        let mut min = f64::INFINITY;
        let mut argmin = (0usize, 0usize);
        for iy in 0..101 {
            for ix in 0..101 {
                let w = [-3.0 + 6.0 * ix as f64 / 100.0, -3.0 + 6.0 * iy as f64 / 100.0];
                let (tw, _) = amoeba::thresholds_at(f, &w);
                if tw < min {
                    min = tw;
                    argmin = (ix, iy);
                }
            }
        }
        assert!(min >= theta_f * (1.0 - 1e-6), "grid min {min} vs Θ {theta_f}");
        assert!(min <= theta_f * (1.0 + 1e-3));
        // s* = origin for both instances: grid index (50, 50)
        assert!(
            (argmin.0 as i64 - 50).abs() <= 2 && (argmin.1 as i64 - 50).abs() <= 2,
            "argmin {argmin:?}"
        );
    }

    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 30.0, "criterion 6 took {dt:?}");
    println!("PASS criterion 6: amoeba rasters and thresholds ({dt:?})");
}

#[test]
fn criterion_7_nonnegativity_iff_solidness() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 20 {
        let n = if done % 2 == 0 { 2 } else { 3 };
        let Some((_, f)) = random_circuit(&mut rng, n, 8) else {
            continue;
        };
        // theorem regime excludes sums of monomial squares
        if f.c().is_positive() && f.inner_is_even() {
            continue;
        }
        let verdict = certify::decide_nonnegativity(&f).unwrap();
        let nonneg = matches!(
            verdict.status,
            NonnegStatus::Nonnegative | NonnegStatus::Boundary | NonnegStatus::PositiveDefiniteOnCone
        );
        let solid = amoeba::is_solid(&f).solid;
        assert_ne!(solid, Solidness::Unknown, "regime is decidable");
        assert_eq!(
            nonneg,
            solid == Solidness::Solid,
            "mismatch on {}",
            f.base()
        );
        done += 1;
    }
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 30.0, "criterion 7 took {dt:?}");
    println!("PASS criterion 7: nonnegativity ⇔ solidness on 20 instances ({dt:?})");
}

#[test]
fn criterion_8_polytope_suite() {
    let t0 = Instant::now();
    let verts = vec![exp(&[0, 0]), exp(&[4, 0]), exp(&[4, 2]), exp(&[2, 4])];

    let q = PolygonSupport::new(verts.clone(), exp(&[2, 1])).unwrap();
    let interior = q.interior_lattice_points();
    let expect: Vec<Exponent> = [[1, 1], [2, 1], [3, 1], [2, 2], [3, 2], [2, 3]]
        .iter()
        .map(|v| exp(v))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    assert_eq!(interior, expect);
    assert_eq!(q.enumerate_triangulations().len(), 2);

    let mut affirmative = Vec::new();
    for y in &interior {
        let q = PolygonSupport::new(verts.clone(), y.clone()).unwrap();
        if polygon::universal_sos_criterion(&q).unwrap().universal_sos {
            affirmative.push(y.clone());
        }
    }
    assert_eq!(affirmative, vec![exp(&[2, 1]), exp(&[3, 1])]);

    // the necessity check alone does not separate (2,2)
    let q22 = PolygonSupport::new(verts, exp(&[2, 2])).unwrap();
    assert!(polygon::necessity_check_sos(&q22));
    assert!(!polygon::universal_sos_criterion(&q22).unwrap().universal_sos);

    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 5.0, "criterion 8 took {dt:?}");
    println!("PASS criterion 8: polytope triangulation criterion ({dt:?})");
}

#[test]
fn criterion_9a_certify_sampling_oracle() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut done = 0;
    while done < 200 {
        let n = 1 + done % 3;
        let Some((p, f)) = random_circuit(&mut rng, n, 10) else {
            continue;
        };
        let verdict = certify::decide_nonnegativity(&f).unwrap();
        match verdict.status {
            NonnegStatus::NotNonnegative => {
                let w = verdict.witness.expect("witness required");
                assert!(p.eval_f64(&w) < 0.0, "witness fails on {p}");
            }
            _ => {
                let min = grid_min_relative(&p);
                assert!(min >= -1e-9, "grid found {min} < 0 on nonnegative {p}");
            }
        }
        done += 1;
    }
    let dt = t0.elapsed();
    println!("PASS criterion 9a: certify sampling oracle, 200 instances, 0 disagreements ({dt:?})");
}

#[test]
fn criterion_9b_convexity_sampling_oracle() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(17);

    // univariate shapes
    for _ in 0..60 {
        let d = rng.gen_range(2..=5);
        let y = rng.gen_range(1..2 * d);
        let a = rat(rng.gen_range(-8..=8), rng.gen_range(1..=4));
        let b = rat(rng.gen_range(1..=8), rng.gen_range(1..=4));
        let mut terms = vec![
            (exp(&[0]), Rat::one()),
            (exp(&[2 * d]), b.clone()),
        ];
        if !a.is_zero() {
            terms.push((exp(&[y]), a.clone()));
        }
        let Ok(p) = SparsePoly::new(1, terms) else { continue };
        let Ok(v) = convexity::is_convex(&p) else { continue };
        let second = |x: f64| -> f64 {
            let aa = rat_to_f64(&a);
            let bb = rat_to_f64(&b);
            let yy = y as f64;
            let dd = 2.0 * d as f64;
            (if p.coeff(&exp(&[y])).is_some() {
                aa * yy * (yy - 1.0) * x.powi(y as i32 - 2)
            } else {
                0.0
            }) + bb * dd * (dd - 1.0) * x.powi(2 * d as i32 - 2)
        };
        let mut saw_negative = false;
        for i in 0..=200 {
            let x = -5.0 + 10.0 * i as f64 / 200.0;
            let s = second(x);
            match v.status {
                ConvexStatus::Convex => assert!(s >= -1e-9, "D² = {s} at {x} for {p}"),
                _ => saw_negative |= s < -1e-12,
            }
        }
        if v.status == ConvexStatus::NotConvex {
            assert!(saw_negative, "no negative second derivative found for {p}");
        }
    }

    // binary forms: Hessian minors on the z = 1 slice
    for _ in 0..60 {
        let d = rng.gen_range(2..=4);
        let y = rng.gen_range(1..2 * d);
        let a = rat(rng.gen_range(-6..=6), rng.gen_range(1..=8));
        if a.is_zero() {
            continue;
        }
        let terms = vec![
            (exp(&[0, 2 * d]), Rat::one()),
            (exp(&[y, 2 * d - y]), a.clone()),
            (exp(&[2 * d, 0]), Rat::one()),
        ];
        let Ok(p) = SparsePoly::new(2, terms) else { continue };
        let Ok(v) = convexity::is_convex(&p) else { continue };
        let fxx = p.partial_derivative(0).and_then(|q| q.partial_derivative(0));
        let fzz = p.partial_derivative(1).and_then(|q| q.partial_derivative(1));
        let fxz = p.partial_derivative(0).and_then(|q| q.partial_derivative(1));
        let eval = |q: &Option<SparsePoly>, x: f64| q.as_ref().map_or(0.0, |q| q.eval_f64(&[x, 1.0]));
        let mut saw_negative = false;
        for i in 0..=200 {
            let x = -5.0 + 10.0 * i as f64 / 200.0;
            let m11 = eval(&fxx, x);
            let det = m11 * eval(&fzz, x) - eval(&fxz, x).powi(2);
            match v.status {
                ConvexStatus::Convex => {
                    assert!(m11 >= -1e-9 && det >= -1e-9, "minors {m11}, {det} at {x} for {p}");
                }
                _ => saw_negative |= m11 < -1e-9 || det < -1e-9,
            }
        }
        if v.status == ConvexStatus::NotConvex {
            assert!(saw_negative, "no negative Hessian minor found for {p}");
        }
    }

    // multivariate circuits: NotConvex always; find a negative [1,2]-minor
    // by following the vertex direction of its Newton polytope
    let mut done = 0;
    while done < 15 {
        let Some((p, f)) = random_circuit(&mut rng, 2, 8) else {
            continue;
        };
        if !f.vertices()[0].is_zero() {
            continue; // witness search assumes an anchored constant term
        }
        let v = convexity::is_convex(&p).unwrap();
        assert_eq!(v.status, ConvexStatus::NotConvex);
        assert!(
            negative_minor_exists(&p, &f),
            "no negative minor found for {p}"
        );
        done += 1;
    }

    let dt = t0.elapsed();
    println!("PASS criterion 9b: convexity verdicts vs Hessian sampling ({dt:?})");
}

/// Exact search for a point with a negative [1,2]x[1,2] Hessian minor:
/// march along the direction separating the inner point from the facet
/// spanned by the nonzero vertices; the minor's dominant monomial there
/// has a negative coefficient.
fn negative_minor_exists(p: &SparsePoly, f: &CircuitPoly) -> bool {
    use circuit_cert::linalg::RatMat;
    let n = p.dimension();
    let fxx = p.partial_derivative(0).and_then(|q| q.partial_derivative(0));
    let fyy = p.partial_derivative(1).and_then(|q| q.partial_derivative(1));
    let fxy = p.partial_derivative(0).and_then(|q| q.partial_derivative(1));
    let eval = |q: &Option<SparsePoly>, x: &[Rat]| {
        q.as_ref()
            .map_or(Rat::from_integer(0.into()), |q| q.eval_rat(x))
    };
    // direction u with <u, y - α(j)> > 0 for the nonzero vertices:
    // solve <a, α(j)> = 1 and take u = -a, scaled to integers
    let mut rows = Vec::new();
    for v in &f.vertices()[1..] {
        rows.push(
            v.0.iter()
                .map(|&x| Rat::from_integer(x.into()))
                .collect::<Vec<Rat>>(),
        );
    }
    let m = RatMat::from_rows(rows);
    let Some(avec) = m.solve(&vec![Rat::one(); n]) else {
        return false;
    };
    let mut denom_lcm = num_bigint::BigInt::from(1);
    for q in &avec {
        denom_lcm = num_integer::Integer::lcm(&denom_lcm, q.denom());
    }
    let u: Vec<Rat> = avec
        .iter()
        .map(|q| -(q * Rat::from_integer(denom_lcm.clone())))
        .collect();
    for k in 0..40 {
        let x: Vec<Rat> = u
            .iter()
            .map(|ui| {
                // 2^(k * u_i) for integer u_i
                let e = (ui * Rat::from_integer(k.into()))
                    .numer()
                    .clone();
                let e64: i64 = e.try_into().unwrap_or(0);
                if e64 >= 0 {
                    Rat::from_integer(num_bigint::BigInt::from(1) << e64.min(800) as usize)
                } else {
                    Rat::new(1.into(), num_bigint::BigInt::from(1) << (-e64).min(800) as usize)
                }
            })
            .collect();
        let minor = eval(&fxx, &x) * eval(&fyy, &x) - {
            let v = eval(&fxy, &x);
            &v * &v
        };
        if minor.is_negative() {
            return true;
        }
    }
    false
}

#[test]
fn criterion_9c_orthant_search_soundness() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut found = 0;
    let mut attempts = 0;
    while found < 40 && attempts < 4000 {
        attempts += 1;
        let n = 2 + attempts % 2;
        // simplex 0, 2d·e_j with a couple of inner terms of random sign
        let d = rng.gen_range(2..=4);
        let mut terms: Vec<(Exponent, Rat)> = Vec::new();
        let mut zero = vec![0i64; n];
        terms.push((Exponent(zero.clone()), Rat::one()));
        for j in 0..n {
            zero[j] = 2 * d;
            terms.push((Exponent(zero.clone()), Rat::one()));
            zero[j] = 0;
        }
        let k = rng.gen_range(1..=3);
        for _ in 0..k {
            let y: Vec<i64> = (0..n).map(|_| rng.gen_range(1..2 * d - 1)).collect();
            if y.iter().sum::<i64>() >= 2 * d {
                continue;
            }
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            terms.push((Exponent(y), rat(sign, 1)));
        }
        let Ok(p) = SparsePoly::new(n, terms) else {
            continue;
        };
        let Ok(Some(sigma)) = sonc::orthant_flip_search(&p) else {
            continue;
        };
        // every constrained inner term must be negative at σ ⊙ 1 and, by
        // sign algebra, on the whole open orthant
        let flipped = sonc::flip_signs(&p, &sigma);
        let ones = vec![1.0; n];
        for (e, c) in flipped.terms() {
            let is_vertex = e.is_zero() || e.0.iter().any(|&x| x == 2 * d);
            if is_vertex {
                continue;
            }
            if e.is_even() && c.is_positive() {
                continue; // monomial square, unconstrained
            }
            assert!(
                c.is_negative(),
                "constrained term {e} not negative after flip on {p}"
            );
            // numeric check at σ ⊙ 1
            let mono = |x: &[f64]| -> f64 {
                let mut m = rat_to_f64(p.coeff(e).unwrap());
                for (xi, ei) in x.iter().zip(&e.0) {
                    m *= xi.powi(*ei as i32);
                }
                m
            };
            let at_sigma: Vec<f64> = sigma.iter().map(|&s| s as f64).collect();
            assert!(mono(&at_sigma) < 0.0);
            let _ = &ones;
        }
        found += 1;
    }
    assert!(found >= 40, "only {found} instances with feasible orthants");
    let dt = t0.elapsed();
    println!("PASS criterion 9c: GF(2) orthant soundness on {found} instances ({dt:?})");
}

#[test]
fn criterion_9d_triangulation_catalan_counts() {
    let t0 = Instant::now();
    let catalan = [1usize, 1, 2, 5, 14, 42, 132, 429, 1430];
    for m in 4..=10 {
        let mut pts = Vec::new();
        for i in 0..m {
            let ang = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
            pts.push(exp(&[
                2 * (100.0 * ang.cos()).round() as i64,
                2 * (100.0 * ang.sin()).round() as i64,
            ]));
        }
        let q = PolygonSupport::new(pts, exp(&[0, 0])).unwrap();
        assert_eq!(q.enumerate_triangulations().len(), catalan[m - 2], "m = {m}");
    }
    let dt = t0.elapsed();
    println!("PASS criterion 9d: triangulation counts are Catalan numbers ({dt:?})");
}

#[test]
fn criterion_9e_sonc_pipeline_soundness() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut done = 0;
    while done < 30 {
        // sum of known-nonnegative scaled agiforms sharing a support
        let n = 2;
        let verts = vec![exp(&[0, 0]), exp(&[6, 0]), exp(&[0, 4])];
        let points = circuit_cert::lattice::enumerate_lattice_points(&verts).unwrap();
        let interior: Vec<Exponent> = points
            .into_iter()
            .filter(|p| {
                circuit_cert::lattice::barycentric(&verts, p)
                    .unwrap()
                    .iter()
                    .all(|l| l.is_positive())
            })
            .collect();
        let k = rng.gen_range(2..=3.min(interior.len()));
        let mut f: Option<SparsePoly> = None;
        let mut used = std::collections::BTreeSet::new();
        for _ in 0..k {
            let y = &interior[rng.gen_range(0..interior.len())];
            if !used.insert(y.clone()) {
                continue;
            }
            let t = rat(rng.gen_range(1..=6), rng.gen_range(1..=3));
            let depth = rat(rng.gen_range(1..=4), 4);
            let piece = scaled_agiform(&verts, y, &t, &depth).unwrap();
            f = Some(match f {
                None => piece,
                Some(acc) => acc.add_scaled(&piece, &Rat::one()).unwrap(),
            });
        }
        let f = f.unwrap();
        if f.term_count() < n + 2 {
            continue;
        }
        match sonc::decompose_multi_inner(&f) {
            Ok(SoncOutcome::Certificate(cert)) => {
                let rep = sonc::verify_certificate(&cert);
                assert!(rep.valid, "verification failed on {f}: {:?}", rep.failures);
                done += 1;
            }
            Ok(SoncOutcome::NotSonc { witness, .. }) => {
                panic!("nonnegative input reported negative at {witness:?}: {f}")
            }
            Err(e) => panic!("decomposition error on {f}: {e}"),
        }
    }
    let dt = t0.elapsed();
    println!("PASS criterion 9e: SONC pipeline sound on 30 nonnegative sums ({dt:?})");
}
