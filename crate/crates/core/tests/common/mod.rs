//! Shared fixtures and proptest strategies for the integration tests.

#![allow(dead_code)]

use harmonic_ends_core::endspec::EndDefinition;
use harmonic_ends_core::linalg::Matrix;
use harmonic_ends_core::series::{LaurentForm, PowerSeries};
use harmonic_ends_core::Complex;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

/// Proptest configuration with a fixed seed, so every run draws the same cases.
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x6861_726d),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn form(terms: &[(i32, f64, f64)]) -> LaurentForm {
    LaurentForm::new(terms.iter().map(|&(e, re, im)| (e, c(re, im)))).unwrap()
}

pub fn end(label: &str, forms: &[&[(i32, f64, f64)]]) -> EndDefinition {
    EndDefinition::new(label, forms.iter().map(|t| form(t)).collect()).unwrap()
}

pub fn plane() -> EndDefinition {
    end("plane", &[&[(0, 1.0, 0.0)], &[(0, 0.0, 1.0)]])
}

pub fn horn() -> EndDefinition {
    end("horn", &[&[(0, 1.0, 0.0)], &[(0, 0.0, 1.0)], &[(-1, 1.0, 0.0)]])
}

pub fn example1() -> EndDefinition {
    end(
        "example1",
        &[
            &[(-3, 1.0, 0.0), (-1, 1.0, 0.0)],
            &[(-3, 0.0, 1.0), (-2, 1.0, 0.0)],
            &[(-3, 1.0, 0.0), (-2, 1.0, 0.0)],
        ],
    )
}

pub fn example2() -> EndDefinition {
    end("example2", &[&[(0, 1.0, 0.0)], &[(-1, 1.0, 0.0)], &[(-2, 0.0, 1.0)]])
}

pub fn catenoid() -> EndDefinition {
    end(
        "catenoid",
        &[
            &[(-2, 0.5, 0.0), (0, -0.5, 0.0)],
            &[(-2, 0.0, 0.5), (0, 0.0, 0.5)],
            &[(-1, 1.0, 0.0)],
        ],
    )
}

pub fn probe() -> EndDefinition {
    end("probe", &[&[(0, 0.0, 1.0)], &[(-1, 1.0, 0.0)], &[(-3, 1.0, 0.0)]])
}

pub fn diagonal() -> EndDefinition {
    let h = 0.5f64.sqrt();
    end("case-ii-diagonal", &[&[(0, h, h)], &[(-1, 1.0, 0.0)], &[(-3, 1.0, 0.0)]])
}

pub fn case_i_simple() -> EndDefinition {
    end("case-i-2", &[&[(0, 1.0, 0.0)], &[(-2, 1.0, 0.0)], &[(-2, 0.0, 1.0)]])
}

pub fn case_i_double() -> EndDefinition {
    end("case-i-3", &[&[(0, 1.0, 0.0)], &[(-3, 1.0, 0.0)], &[(-3, 0.0, 1.0)]])
}

pub fn case_iii() -> EndDefinition {
    end(
        "case-iii",
        &[&[(1, 0.0, 1.0)], &[(-1, 1.0, 0.0), (1, 0.0, 1.0)], &[(-1, 1.0, 0.0), (0, 1.0, 0.0)]],
    )
}

/// Ends that are immersions of the punctured unit disk.
pub fn immersed_ends() -> Vec<EndDefinition> {
    vec![
        plane(),
        horn(),
        example2(),
        catenoid(),
        diagonal(),
        case_i_simple(),
        case_i_double(),
    ]
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn complex(scale: f64) -> impl Strategy<Value = Complex> {
    (-scale..scale, -scale..scale).prop_map(|(a, b)| c(a, b))
}

pub fn series(len: usize, scale: f64) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec(complex(scale), len).prop_map(|v| PowerSeries::new(v).unwrap())
}

/// Series with constant term of modulus in `[0.5, 1.5]`.
pub fn unit_series(len: usize) -> impl Strategy<Value = PowerSeries> {
    (0.5f64..1.5, -3.0f64..3.0, series(len, 0.5)).prop_map(|(m, arg, s)| {
        let mut v = s.coeffs().to_vec();
        v[0] = Complex::from_polar(m, arg);
        PowerSeries::new(v).unwrap()
    })
}

/// Diffeomorphism germ `z·u(z)` with `|u(0)| ∈ [0.5, 1.5]`.
pub fn germ(order: usize) -> impl Strategy<Value = PowerSeries> {
    unit_series(order - 1).prop_map(|u| u.shift_up(1))
}

/// Form with leading exponent `-pole`, leading coefficient of modulus in
/// `[1, 2]`, real residue and further terms decaying like `2^{-k}`, so the
/// form converges on the disk of radius 2.
pub fn laurent_form(pole: i32, extra: usize) -> impl Strategy<Value = LaurentForm> {
    decaying_form(pole, extra, 0.5)
}

/// As [`laurent_form`] with the `k`-th further term bounded by `decay^{k+1}`.
pub fn decaying_form(pole: i32, extra: usize, decay: f64) -> impl Strategy<Value = LaurentForm> {
    let len = (pole.max(0) as usize) + extra;
    (
        1.0f64..2.0,
        -3.0f64..3.0,
        prop::collection::vec(complex(1.0), len),
        -1.0f64..1.0,
    )
        .prop_map(move |(m, arg, rest, rho)| {
            let mut terms = vec![(-pole, Complex::from_polar(m, arg))];
            for (k, v) in rest.into_iter().enumerate() {
                let e = -pole + 1 + k as i32;
                let v = if e == -1 { c(rho, 0.0) } else { v * decay.powi(k as i32 + 1) };
                terms.push((e, v));
            }
            if pole == 1 {
                terms[0].1 = c(if rho.abs() < 0.2 { 1.0 } else { rho }, 0.0);
            }
            LaurentForm::new(terms).unwrap()
        })
}

/// End with 3 forms of pole orders `≤ max_pole`, real residues, possibly
/// sharing leading exponents.
pub fn random_end(max_pole: i32) -> impl Strategy<Value = EndDefinition> {
    prop::collection::vec((0..=max_pole, any::<bool>()), 3).prop_flat_map(move |spec| {
        let forms: Vec<_> = spec
            .into_iter()
            .map(|(p, real_lead)| {
                laurent_form(p, 2).prop_map(move |f| if real_lead { realify_leading(&f) } else { f })
            })
            .collect();
        forms.prop_map(|forms| EndDefinition::new("random", forms).unwrap())
    })
}

fn realify_leading(f: &LaurentForm) -> LaurentForm {
    let mut terms = f.terms().to_vec();
    terms[0].1 = c(terms[0].1.norm(), 0.0);
    LaurentForm::new(terms).unwrap()
}

/// Invertible real matrix with condition number bounded away from singular.
pub fn invertible(d: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), d)
        .prop_map(move |rows| {
            let mut m = Matrix::from_rows(rows);
            for i in 0..d {
                m.rows[i][i] += 2.5;
            }
            m
        })
}

/// Orthogonal matrix from Gram-Schmidt on a random matrix.
pub fn orthogonal(d: usize) -> impl Strategy<Value = Matrix> {
    invertible(d).prop_map(move |m| {
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(d);
        for row in m.rows {
            let mut v = row;
            for u in &q {
                let p: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= p * b);
            }
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= n);
            q.push(v);
        }
        Matrix::from_rows(q)
    })
}
