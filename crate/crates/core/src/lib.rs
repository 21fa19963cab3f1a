//! Ends of harmonic immersions of punctured Riemann surfaces.
//!
//! An end is the image of a punctured disk under
//! `f(z) = Re ∫ (ω_1, …, ω_d)` where every `ω_k` is a meromorphic 1-form
//! with a pole (of any order) only at the origin. This crate keeps the
//! forms as finite Laurent data and provides:
//!
//! - [`series`]: truncated complex power series, finite Laurent forms and
//!   pullbacks by holomorphic germs;
//! - [`endspec`]: end definitions, validation, affine reduction to the type
//!   of the end and the blow-up data of the generic case;
//! - [`normalize`]: holomorphic coordinate changes bringing the top form to
//!   normal form;
//! - [`immersion`]: exact evaluation of `f` and its derivative jet in polar
//!   coordinates, the Gauss map and winding of projected circles;
//! - [`curvature`]: the geodesic curvature integrand of the circles
//!   `t ↦ f(re^{it})`, Gauss curvature density, singularity-aware quadrature,
//!   extrapolation of the total curvature as `r → 0` and blow-up checks.
//!
//! The crate is `no_std` (with `alloc`) unless the `std` feature is enabled.
#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod curvature;
pub mod endspec;
pub mod error;
pub mod extrapolate;
pub mod immersion;
pub mod linalg;
pub mod normalize;
pub mod quadrature;
pub mod series;

pub use error::{Error, Result};

/// Complex coefficient type used throughout.
pub type Complex = num_complex::Complex64;

/// Angle reduced to `[0, 2π)`.
pub(crate) fn wrap_angle(t: f64) -> f64 {
    let r = t % core::f64::consts::TAU;
    if r < 0.0 {
        r + core::f64::consts::TAU
    } else {
        r
    }
}
