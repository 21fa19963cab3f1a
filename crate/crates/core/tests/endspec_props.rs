//! Reduction, classification and blow-up data of ends.

mod common;

use common::*;
use harmonic_ends_core::endspec::{
    blowup_data, end_type, max_form_diff, reduce, validate, EndCase, EndDefinition,
    ReductionStep,
};
use harmonic_ends_core::linalg::Matrix;
use harmonic_ends_core::series::LaurentForm;
use harmonic_ends_core::Error;
use proptest::prelude::*;

fn descending(orders: &[Option<i32>]) -> Vec<Option<i32>> {
    let mut v = orders.to_vec();
    v.sort_by(|a, b| b.cmp(a));
    v
}

/// Forms with Gaussian-integer coefficients in `{-1, 0, 1} + i{-1, 0, 1}`,
/// real residues and pole orders up to 4, so integer combinations can cancel.
fn lattice_end() -> impl Strategy<Value = EndDefinition> {
    let coeff = (-1i32..=1, -1i32..=1);
    let form = prop::collection::vec(coeff, 6).prop_map(|cs| {
        let terms: Vec<(i32, f64, f64)> = cs
            .into_iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let e = k as i32 - 4;
                (e, a as f64, if e == -1 { 0.0 } else { b as f64 })
            })
            .collect();
        form(&terms)
    });
    prop::collection::vec(form, 3)
        .prop_filter("some form is nonzero", |f| f.iter().any(|f| !f.is_zero()))
        .prop_map(|forms| EndDefinition::new("lattice", forms).unwrap())
}

fn integer_matrices() -> Vec<Matrix> {
    let mut out = Vec::new();
    for code in 0..3usize.pow(9) {
        let mut c = code;
        let mut rows = vec![vec![0.0; 3]; 3];
        for row in rows.iter_mut() {
            for v in row.iter_mut() {
                *v = (c % 3) as f64 - 1.0;
                c /= 3;
            }
        }
        let m = Matrix::from_rows(rows);
        if m.determinant().abs() > 0.5 {
            out.push(m);
        }
    }
    out
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn reduce_is_idempotent(e in random_end(4)) {
        let once = reduce(&e).unwrap();
        let twice = reduce(&once.reduced).unwrap();
        prop_assert!(twice.matrix.max_abs_diff(&Matrix::identity(3)) < 1e-9);
        prop_assert_eq!(twice.reduced.pole_orders(), once.reduced.pole_orders());
    }

    #[test]
    fn reduce_reconstructs(e in random_end(4)) {
        let red = reduce(&e).unwrap();
        let scale = e.forms().iter().map(LaurentForm::max_abs).fold(1.0, f64::max);
        prop_assert!(red.reconstruction_error < 1e-10 * scale);
        let recombined = e.recombine(&red.matrix).unwrap();
        prop_assert!(max_form_diff(recombined.forms(), red.reduced.forms()) < 1e-10 * scale);
        prop_assert!(red.matrix.determinant().abs() > 1e-12);
    }

    #[test]
    fn reduced_orders_are_sorted(e in random_end(4)) {
        let t = end_type(&e).unwrap();
        prop_assert!(t.pole_orders.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn type_is_affine_invariant(e in random_end(4), m in invertible(3)) {
        let t = end_type(&e).unwrap();
        let moved = e.recombine(&m).unwrap();
        let u = end_type(&moved).unwrap();
        prop_assert_eq!(t, u);
    }

    #[test]
    fn blowup_data_is_positive(
        n in 2i32..=5,
        rho in -2.0f64..2.0,
        lower in prop::collection::vec(laurent_form(1, 6), 2),
    ) {
        let mut forms = lower;
        forms.push(form(&[(-n, 1.0, 0.0), (-1, rho, 0.0)]));
        let e = EndDefinition::new("generic", forms).unwrap();
        match blowup_data(&e) {
            Ok(data) => {
                prop_assert!(data.b > 0.0 && data.b.is_finite());
                let a = data.a.unwrap();
                prop_assert!(a > 0.0 && a.is_finite());
                prop_assert!((a - (n - 1) as f64 / data.b.sqrt()).abs() < 1e-12 * a);
            }
            Err(err) => prop_assert!(matches!(err, Error::AllMkInfinite)),
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn reduction_is_lexicographically_minimal(e in lattice_end()) {
        let red = reduce(&e).unwrap();
        let best = descending(&red.reduced.pole_orders());
        for m in integer_matrices() {
            let combos: Vec<Option<i32>> = m
                .rows
                .iter()
                .map(|w| LaurentForm::linear_combination(w, e.forms()).pole_order())
                .collect();
            let candidate = descending(&combos);
            prop_assert!(candidate >= best, "{:?} beats {:?} via {:?}", candidate, best, m);
        }
    }
}

#[test]
fn example1_type_and_certificate() {
    let e = example1();
    let red = reduce(&e).unwrap();
    assert_eq!(red.reduced.pole_orders(), vec![Some(2), Some(3), Some(3)]);
    let t = end_type(&e).unwrap();
    assert_eq!(t.case, EndCase::IndependentTop);
    assert_eq!(t.predicted_curvature(), -4.0 * std::f64::consts::PI);
    let recombined = e.recombine(&red.matrix).unwrap();
    assert!(max_form_diff(recombined.forms(), red.reduced.forms()) < 1e-14);
    assert!(red
        .certificate
        .iter()
        .any(|s| matches!(s, ReductionStep::Eliminate { level: 3, .. })));
}

#[test]
fn named_end_types() {
    let cases = [
        (plane(), vec![Some(0), Some(0)], EndCase::SmoothPoint),
        (horn(), vec![Some(0), Some(0), Some(1)], EndCase::SimplePoleTop),
        (example2(), vec![Some(0), Some(1), Some(2)], EndCase::Generic),
        (catenoid(), vec![Some(1), Some(2), Some(2)], EndCase::IndependentTop),
        (probe(), vec![Some(0), Some(1), Some(3)], EndCase::Generic),
        (case_i_simple(), vec![Some(0), Some(2), Some(2)], EndCase::IndependentTop),
        (case_iii(), vec![Some(-1), Some(0), Some(1)], EndCase::SimplePoleTop),
    ];
    for (e, orders, case) in cases {
        let t = end_type(&e).unwrap();
        assert_eq!(t.pole_orders, orders, "{}", e.label());
        assert_eq!(t.case, case, "{}", e.label());
    }
}

#[test]
fn validation_of_named_ends() {
    for e in immersed_ends() {
        let report = validate(&e, 256);
        assert!(report.valid, "{}: {:?}", e.label(), report.issues);
    }
    let bad = end("bad", &[&[(0, 1.0, 0.0)], &[(-1, 0.0, 1.0)]]);
    let report = validate(&bad, 64);
    assert!(!report.valid);
    assert!(matches!(report.into_result(), Err(Error::ResidueNotReal { index: 2, .. })));
    let report = validate(&probe(), 256);
    assert!(!report.valid);
}
