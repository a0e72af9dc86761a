//! Independent cross-checks between the closed forms, the determinant
//! formula, series reversion and the Newton resolvent.

use disk_resolvents::functionals::{
    b2_closed, b3_closed, classify_lambda, fekete_szego, hessenberg_coefficient, phi_closed, phi_f_closed,
    region_predicates, uvw, Region,
};
use disk_resolvents::resolvents::closed_form_f1;
use disk_resolvents::schwarz::sample_with;
use disk_resolvents::{HalfPlane, ResolventSpec, SchwarzSpec, Series, VectorFieldSpec};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = c(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .unwrap();
        if m[pivot][col].norm() == 0.0 {
            return c(0.0, 0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        let pivot_row = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            let factor = row[col] / pivot_row[col];
            for (dst, src) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= factor * src;
            }
        }
    }
    det
}

/// Upper Hessenberg Toeplitz matrix: `c_{j−i+1}` on and above the diagonal,
/// `−1` on the subdiagonal.
fn hessenberg_matrix(cs: &[Complex64], n: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j >= i {
                        cs[j - i]
                    } else if j + 1 == i {
                        c(-1.0, 0.0)
                    } else {
                        c(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect()
}

fn random_q<R: Rng>(rng: &mut R) -> Complex64 {
    c(rng.gen_range(0.1..3.0), rng.gen_range(-3.0..3.0))
}

fn random_r<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range((0.05f64).ln()..(20.0f64).ln()).exp()
}

#[test]
fn hessenberg_matches_series_and_explicit_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let q = random_q(&mut rng);
        let r = random_r(&mut rng);
        let omega = sample_with(&mut rng, 5);
        let field = VectorFieldSpec::new(q, omega.clone()).unwrap();
        let big_f = field.make_f(r, 8);
        let w = omega.to_series(8);
        let alpha = c(2.0 * r * q.re, 0.0);
        for p in 2..=8 {
            let cs: Vec<Complex64> = (1..p).map(|k| w.coeff(k)).collect();
            let via_recurrence = hessenberg_coefficient(&alpha, &cs, p);
            let via_matrix = alpha * determinant(hessenberg_matrix(&cs, p - 1));
            assert!((via_recurrence - big_f.coeff(p)).norm() < 1e-9, "p = {p}");
            assert!((via_matrix - big_f.coeff(p)).norm() < 1e-9, "p = {p}");
        }
    }
}

#[test]
fn closed_forms_match_reversion() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let q = random_q(&mut rng);
        let r = random_r(&mut rng);
        let lambda = c(rng.gen_range(-4.0..6.0), rng.gen_range(-5.0..5.0));
        let omega = sample_with(&mut rng, 4);
        let (c1, c2) = omega.c1_c2();
        let spec = ResolventSpec::new(r, VectorFieldSpec::new(q, omega).unwrap()).unwrap();
        let g = spec.resolvent_series(4).unwrap();
        let psi = HalfPlane::for_resolvent(q, r);
        assert!((g.coeff(2) - b2_closed(&psi, &c1)).norm() < 1e-10);
        assert!((g.coeff(3) - b3_closed(&psi, &c1, &c2)).norm() < 1e-10);
        let phi = fekete_szego(&g, &lambda).unwrap();
        assert!((phi - phi_closed(&psi, &c1, &c2, &lambda)).norm() < 1e-10);

        let big_f = spec.field().make_f(r, 3);
        let phi_f = fekete_szego(&big_f, &lambda).unwrap();
        let scale = 1.0 + (psi.alpha.norm() + psi.beta.norm()).powi(2) * (1.0 + lambda.norm());
        assert!((phi_f - phi_f_closed(&psi, &c1, &c2, &lambda)).norm() < 1e-12 * scale);
        let two = c(2.0, 0.0);
        let mirrored = psi.beta.norm().powi(6) * phi_closed(&psi, &c1, &c2, &(two - lambda)).norm();
        assert!((phi_f.norm() - mirrored).abs() < 1e-12 * scale);
    }
}

#[test]
fn closed_form_f1_matches_newton() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let q = random_q(&mut rng);
        let r = random_r(&mut rng);
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let spec = ResolventSpec::new(r, VectorFieldSpec::new(q, SchwarzSpec::Rotation { theta }).unwrap()).unwrap();
        for _ in 0..20 {
            let z = Complex64::from_polar(0.8 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            let newton = spec.resolvent_point(z, 1e-14).unwrap();
            let closed = closed_form_f1(q, r, theta, z).unwrap();
            assert!((newton - closed).norm() < 1e-9, "q={q} r={r} z={z}");
            assert!(newton.norm() < 1.0);
        }
    }
}

#[test]
fn series_agree_with_newton_inside_the_disk() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let q = random_q(&mut rng);
        let r = random_r(&mut rng);
        let spec = ResolventSpec::new(r, VectorFieldSpec::new(q, sample_with(&mut rng, 3)).unwrap()).unwrap();
        let g = spec.resolvent_series(40).unwrap();
        let z = Complex64::from_polar(0.1, rng.gen_range(0.0..std::f64::consts::TAU));
        assert!((g.evaluate(&z) - spec.resolvent_point(z, 1e-14).unwrap()).norm() < 1e-10);
    }
}

#[test]
fn every_grid_point_is_in_exactly_one_region() {
    for q in [c(1.0, 0.0), c(1.0, 1.0), c(2.0, 0.5)] {
        let mut s4 = 0;
        for i in 0..200 {
            for j in 0..200 {
                let lambda = c(
                    -4.0 + 10.0 * (j as f64 + 0.5) / 200.0,
                    -5.0 + 10.0 * (i as f64 + 0.5) / 200.0,
                );
                let hits = region_predicates(q, lambda).iter().filter(|&&h| h).count();
                assert_eq!(hits, 1, "q={q} λ={lambda}");
                let cls = classify_lambda(q, lambda);
                assert_eq!(cls.mu.is_some(), matches!(cls.region, Region::S4 | Region::S5));
                if let Some(mu) = cls.mu {
                    assert!(mu > 0.0);
                }
                s4 += (cls.region == Region::S4) as usize;
            }
        }
        if q == c(1.0, 0.0) {
            assert_eq!(s4, 0);
        } else if q == c(1.0, 1.0) {
            assert!(s4 > 0);
        }
    }
}

#[test]
fn boundary_points_are_classified_once() {
    for q in [c(1.0, 0.0), c(1.0, 1.0), c(2.0, 0.5), c(0.3, -2.0)] {
        let tan = q.im / q.re;
        let centre = c(1.5, -0.5 * tan);
        let radius = q.norm() / (2.0 * q.re);
        let mut points = vec![c(2.0, 0.0), c(2.0, -tan), c(2.0, 3.0), c(2.0, -7.0)];
        points.extend((0..64).map(|k| centre + Complex64::from_polar(radius, k as f64 * 0.1)));
        for lambda in points {
            let hits = region_predicates(q, lambda).iter().filter(|&&h| h).count();
            assert_eq!(hits, 1, "q={q} λ={lambda}");
        }
        assert_eq!(classify_lambda(q, c(2.0, 0.0)).region, Region::S3);
        assert_eq!(classify_lambda(q, c(2.0, -tan)).region, Region::S3);
    }
}

#[test]
fn mu_for_unit_q_has_the_rescaled_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..1000 {
        let lambda = c(rng.gen_range(-4.0..6.0), rng.gen_range(-5.0..5.0));
        if let Some(mu) = classify_lambda(c(1.0, 0.0), lambda).mu {
            let rescaled = 4.0 * (2.0 - lambda.re) / ((2.0 * lambda - 3.0).norm_sqr() - 1.0);
            assert!((mu - rescaled).abs() < 1e-12 * mu.abs().max(1.0));
        }
    }
}

#[test]
fn w_exceeds_one_exactly_when_the_case_condition_holds() {
    use disk_resolvents::functionals::{phi_case, PhiCase};
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..5000 {
        let q = random_q(&mut rng);
        let r = random_r(&mut rng);
        let lambda = c(rng.gen_range(-4.0..6.0), rng.gen_range(-5.0..5.0));
        let (_, _, w) = uvw(q, r, lambda);
        if (w - 1.0).abs() > 1e-9 {
            assert_eq!(
                phi_case(q, r, lambda) == PhiCase::CaseA,
                w > 1.0,
                "q={q} r={r} λ={lambda}"
            );
        }
    }
}

proptest! {
    #[test]
    fn hessenberg_recurrence_equals_geometric_series(
        cs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..8),
        a in 0.1..5.0f64,
    ) {
        let cs: Vec<Complex64> = cs.into_iter().map(|(x, y)| c(x, y)).collect();
        let n = cs.len();
        let mut w = vec![c(0.0, 0.0)];
        w.extend(cs.iter().copied());
        let w = Series::new(w, n);
        let one = Series::constant(c(1.0, 0.0), n);
        // ω / (1 − ω)
        let geom = &w * &(&one - &w).reciprocal().unwrap();
        for p in 2..=n + 1 {
            let lhs = hessenberg_coefficient(&c(a, 0.0), &cs, p);
            prop_assert!((lhs - c(a, 0.0) * geom.coeff(p - 1)).norm() < 1e-10 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn jr_bounds_hold_for_sampled_specs(
        seed in any::<u64>(),
        q_re in 0.1..3.0f64,
        q_im in -3.0..3.0f64,
        log_r in (0.01f64).ln()..(50.0f64).ln(),
        l_re in -4.0..6.0f64,
        l_im in -5.0..5.0f64,
    ) {
        let q = c(q_re, q_im);
        let r = log_r.exp();
        let lambda = c(l_re, l_im);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = ResolventSpec::new(r, VectorFieldSpec::new(q, sample_with(&mut rng, 4)).unwrap()).unwrap();
        for report in disk_resolvents::bounds::check_jr_bounds(&spec, lambda).unwrap() {
            prop_assert!(report.slack >= -1e-9, "{:?}", report);
        }
    }
}
