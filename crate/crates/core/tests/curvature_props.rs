//! Geodesic curvature integrand, Gauss density, ladders, blow-up and
//! Gauss–Bonnet.

mod common;

use std::f64::consts::{PI, TAU};

use common::*;
use harmonic_ends_core::curvature::{
    annulus_area_integral, blowup_check, circle_integral, eta, eta_bound, eta_from_jet,
    gauss_bonnet_annulus, gauss_density, puncture_curvature, rotate90, BlowupConfig,
    CurvatureConfig, QuadratureConfig,
};
use harmonic_ends_core::endspec::EndDefinition;
use harmonic_ends_core::immersion::{eval_jet, PolarPoint};
use harmonic_ends_core::linalg::{dot, norm};
use harmonic_ends_core::Error;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = PolarPoint> {
    (0.02f64..0.9, 0.0f64..TAU).prop_map(|(r, t)| PolarPoint::new(r, t).unwrap())
}

fn vector(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, d)
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn eta_is_bounded(e in random_end(4), p in point()) {
        let jet = eval_jet(&e, p).unwrap();
        let Ok(v) = eta_from_jet(&jet, p) else {
            return Ok(());
        };
        let bound = eta_bound(&jet);
        prop_assert!(v.abs() <= bound * (1.0 + 1e-12) + 1e-300, "{v} > {bound}");
    }

    #[test]
    fn rotate90_is_a_quarter_turn(x in vector(4), y in vector(4), a in -1.0f64..1.0, b in -1.0f64..1.0) {
        prop_assume!(harmonic_ends_core::linalg::wedge_norm(&x, &y) > 1e-3);
        let rx = rotate90(&x, &y, &x).unwrap();
        prop_assert!(dot(&rx, &x).abs() < 1e-12 * dot(&x, &x).max(1.0));
        prop_assert!((norm(&rx) - norm(&x)).abs() < 1e-12 * norm(&x).max(1.0));
        let u: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let ru = rotate90(&x, &y, &u).unwrap();
        let rru = rotate90(&x, &y, &ru).unwrap();
        for (v, w) in rru.iter().zip(&u) {
            prop_assert!((v + w).abs() < 1e-9 * norm(&u).max(1e-3));
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn isometries_preserve_curvature(q in orthogonal(3), p in point()) {
        let cfg = QuadratureConfig::default();
        for e in [horn(), example2(), catenoid(), diagonal()] {
            let moved = e.recombine(&q).unwrap();
            let (a, b) = (eta(&e, p).unwrap(), eta(&moved, p).unwrap());
            prop_assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
            let (ga, gb) = (gauss_density(&e, p).unwrap(), gauss_density(&moved, p).unwrap());
            prop_assert!((ga.k - gb.k).abs() < 1e-9 * ga.k.abs().max(1.0));
            prop_assert!((ga.da - gb.da).abs() < 1e-9 * ga.da.max(1.0));
            let ia = circle_integral(&e, 0.05, &cfg).unwrap();
            let ib = circle_integral(&moved, 0.05, &cfg).unwrap();
            prop_assert!((ia.value - ib.value).abs() < cfg.abs_tol, "{}: {} vs {}", e.label(), ia.value, ib.value);
        }
    }

    #[test]
    fn domain_rotation_shifts_eta(theta in 0.0f64..TAU, p in point()) {
        let cfg = QuadratureConfig::default();
        for e in [horn(), example2(), catenoid(), diagonal()] {
            let rotated = e.rotate_domain(theta);
            let a = eta(&rotated, p).unwrap();
            let b = eta(&e, PolarPoint::new(p.r, p.t + theta).unwrap()).unwrap();
            prop_assert!((a - b).abs() < 1e-9 * b.abs().max(1.0));
            let ia = circle_integral(&e, 0.05, &cfg).unwrap();
            let ib = circle_integral(&rotated, 0.05, &cfg).unwrap();
            prop_assert!((ia.value - ib.value).abs() < cfg.abs_tol, "{}: {} vs {}", e.label(), ia.value, ib.value);
        }
    }
}

#[test]
fn plane_is_flat() {
    let e = plane();
    let cfg = QuadratureConfig::default();
    for r in [0.5, 0.1, 1e-3] {
        assert!((eta(&e, PolarPoint::new(r, 1.0).unwrap()).unwrap() - 1.0).abs() < 1e-14);
        assert!((circle_integral(&e, r, &cfg).unwrap().value - TAU).abs() < 1e-12);
    }
    let gb = gauss_bonnet_annulus(&e, 0.2, 0.5, &cfg).unwrap();
    assert!(gb.area_integral.abs() < 1e-15 && gb.residual.abs() < 1e-12);
    let report = puncture_curvature(&e, &CurvatureConfig::default()).unwrap();
    assert_eq!(report.extrapolated, TAU);
}

#[test]
fn catenoid_is_negatively_curved() {
    let e = catenoid();
    for (r, t) in [(0.1, 0.0), (0.4, 1.3), (0.9, 4.0)] {
        assert!(gauss_density(&e, PolarPoint::new(r, t).unwrap()).unwrap().k < 0.0);
    }
}

#[test]
fn example2_eta_spikes_at_singular_angles() {
    let e = example2();
    let angles = e.singular_angles();
    assert_eq!(angles.len(), 2);
    for r in [1e-1, 1e-2] {
        let vals: Vec<(f64, f64)> = (0..4096)
            .map(|i| {
                let t = TAU * (i as f64 + 0.5) / 4096.0;
                (t, eta(&e, PolarPoint::new(r, t).unwrap()).unwrap())
            })
            .collect();
        assert!(vals.iter().all(|v| v.1.is_finite()));
        for &centre in &angles {
            let (t_min, v_min) = vals
                .iter()
                .copied()
                .filter(|v| (v.0 - centre).abs() < PI / 2.0)
                .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
            assert!((t_min - centre).abs() < 1e-2, "spike at {t_min}, expected {centre}");
            assert!(v_min < -0.5 / r);
        }
    }
}

#[test]
fn ladder_tails_are_monotone() {
    let cfg = CurvatureConfig::default();
    let tol = 1e-8;
    for e in [horn(), example2(), catenoid(), diagonal(), case_i_simple()] {
        let report = puncture_curvature(&e, &cfg).unwrap();
        let dev: Vec<f64> = report.totals.iter().map(|v| (v - report.predicted).abs()).collect();
        for w in dev[dev.len() / 2..].windows(2) {
            assert!(w[1] <= w[0] + tol, "{}: {:?}", e.label(), dev);
        }
        assert!(report.converged, "{}: {}", e.label(), report.extrapolated);
    }
}

#[test]
fn ladder_is_deterministic() {
    let cfg = CurvatureConfig::default();
    let a = puncture_curvature(&diagonal(), &cfg).unwrap();
    let b = puncture_curvature(&diagonal(), &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn catenoid_limit_is_tight() {
    let report = puncture_curvature(&catenoid(), &CurvatureConfig::default()).unwrap();
    assert!((report.extrapolated + TAU).abs() < 1e-3);
}

#[test]
fn gauss_bonnet_on_annuli() {
    let cfg = QuadratureConfig::default();
    for (e, r1, r2) in [(catenoid(), 0.2, 0.5), (example2(), 0.2, 0.5), (example2(), 0.3, 0.6), (horn(), 0.1, 0.9)] {
        let gb = gauss_bonnet_annulus(&e, r1, r2, &cfg).unwrap();
        assert!(gb.residual.abs() < 1e-4, "{}: {}", e.label(), gb.residual);
    }
}

#[test]
fn area_integral_rejects_bad_annulus() {
    assert!(matches!(annulus_area_integral(&catenoid(), 0.5, 0.2), Err(Error::Domain(_))));
}

#[test]
fn blowup_of_generic_ends() {
    let cfg = BlowupConfig::default();
    for e in [probe(), diagonal()] {
        let report = blowup_check(&e, &cfg).unwrap();
        assert!(report.deviations_decreasing, "{}", e.label());
        let last = report.rows.last().unwrap();
        assert!(last.sup_deviation < 0.02);
        for row in &report.rows {
            assert!((row.singular_integral + PI).abs() < 5e-2);
        }
        let mus: Vec<f64> = report.rows.iter().map(|r| r.fitted_mu.unwrap()).collect();
        assert!(mus.iter().all(|&m| m > 0.1 * mus[0]), "{:?}", mus);
    }
    let probe_report = blowup_check(&probe(), &cfg).unwrap();
    assert_eq!(probe_report.data.a, Some(2.0));
    assert_eq!(probe_report.data.n, 3);
}

#[test]
fn blowup_of_simple_pole_end_cancels() {
    let report = blowup_check(&case_iii(), &BlowupConfig::default()).unwrap();
    assert!(report.deviations_decreasing);
    let expected = report.expected_integral;
    assert!((expected + report.expected_integral_pi.unwrap()).abs() < 1e-12);
    let last = report.rows.last().unwrap();
    assert!((last.singular_integral - expected).abs() < 1e-3);
    assert!((last.singular_integral_pi.unwrap() + expected).abs() < 1e-3);
    assert!(last.sup_deviation_pi.unwrap() < 1e-3);
}

#[test]
fn blowup_needs_normal_form() {
    assert!(matches!(blowup_check(&example1(), &BlowupConfig::default()), Err(Error::WrongCase(_))));
}

#[test]
fn degenerate_points_are_reported() {
    let e = probe();
    let r = 0.1;
    let t = PI / 2.0;
    let jet = eval_jet(&e, PolarPoint::new(r, t).unwrap()).unwrap();
    assert!(jet.normalized_wedge(r) < 1e-14);
    let flat = EndDefinition::new(
        "line",
        vec![form(&[(0, 1.0, 0.0)]), form(&[(0, 1.0, 0.0)])],
    )
    .unwrap();
    assert!(matches!(
        eta(&flat, PolarPoint::new(0.5, 0.3).unwrap()),
        Err(Error::DegenerateAtPoint { .. })
    ));
}
