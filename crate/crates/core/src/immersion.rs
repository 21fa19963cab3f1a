//! Exact evaluation of `f = Re ∫ ω` and its derivative jet in polar
//! coordinates `z = r e^{it}`, the coefficient-level series view of the
//! generic case, tangent planes and winding of projected circles.
//!
//! Every term `c z^e dz` contributes through `w = c r^{e+1} e^{i(e+1)t}`:
//!
//! | quantity | contribution |
//! |----------|--------------|
//! | `f`      | `Re(w)/(e+1)`, or `Re(c) log r - Im(c) t` when `e = -1` |
//! | `f_r`    | `Re(w)/r` |
//! | `f_t`    | `-Im(w)` |
//! | `f_rr`   | `e Re(w)/r²` |
//! | `f_rt`   | `-(e+1) Im(w)/r` |
//! | `f_tt`   | `-(e+1) Re(w)` |
//!
//! so the polar Laplacian `f_rr + f_r/r + f_tt/r²` vanishes term by term.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::endspec::{end_type, generic_normal_form, EndCase, EndDefinition};
use crate::linalg::{dot, norm, orthonormal_pair, plucker, wedge_norm};
use crate::{Complex, Error, Result};

/// Below this normalized wedge (see [`DerivativeJet::normalized_wedge`]) the
/// differential is treated as rank deficient.
pub const IMMERSION_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PolarPoint {
    pub r: f64,
    pub t: f64,
}

impl PolarPoint {
    pub fn new(r: f64, t: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() || !t.is_finite() {
            return Err(Error::domain("polar point needs finite r > 0 and finite t"));
        }
        Ok(Self { r, t })
    }

    pub fn z(&self) -> Complex {
        Complex::from_polar(self.r, self.t)
    }
}

/// `f` and its first and second polar derivatives, each a vector in `ℝ^d`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DerivativeJet {
    pub f: Vec<f64>,
    pub f_r: Vec<f64>,
    pub f_t: Vec<f64>,
    pub f_rr: Vec<f64>,
    pub f_rt: Vec<f64>,
    pub f_tt: Vec<f64>,
}

/// First fundamental form in the `(r, t)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Metric {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl DerivativeJet {
    fn zeros(d: usize) -> Self {
        Self {
            f: vec![0.0; d],
            f_r: vec![0.0; d],
            f_t: vec![0.0; d],
            f_rr: vec![0.0; d],
            f_rt: vec![0.0; d],
            f_tt: vec![0.0; d],
        }
    }

    pub fn dimension(&self) -> usize {
        self.f.len()
    }

    pub fn metric(&self) -> Metric {
        Metric {
            e: dot(&self.f_r, &self.f_r),
            f: dot(&self.f_r, &self.f_t),
            g: dot(&self.f_t, &self.f_t),
        }
    }

    /// `|f_r ∧ f_t| = sqrt(EG - F²)`, from minors.
    pub fn area_element(&self) -> f64 {
        wedge_norm(&self.f_r, &self.f_t)
    }

    /// Largest componentwise `|f_rr + f_r/r + f_tt/r²|`, relative to the
    /// size of the three summands.
    pub fn laplacian_defect(&self, r: f64) -> f64 {
        let mut defect = 0.0f64;
        let mut scale = 0.0f64;
        for k in 0..self.dimension() {
            let a = self.f_rr[k];
            let b = self.f_r[k] / r;
            let c = self.f_tt[k] / (r * r);
            defect = defect.max((a + b + c).abs());
            scale = scale.max(a.abs() + b.abs() + c.abs());
        }
        if scale == 0.0 {
            0.0
        } else {
            defect / scale
        }
    }

    /// `2|f_r ∧ f_t/r| / (|f_r|² + |f_t/r|²)`: 1 for a conformal
    /// differential, 0 where its rank drops. Scale free.
    pub fn normalized_wedge(&self, r: f64) -> f64 {
        let ft: Vec<f64> = self.f_t.iter().map(|v| v / r).collect();
        let den = dot(&self.f_r, &self.f_r) + dot(&ft, &ft);
        if den == 0.0 || !den.is_finite() {
            return 0.0;
        }
        2.0 * wedge_norm(&self.f_r, &ft) / den
    }
}

/// Value of `f` alone.
pub fn eval_point(end: &EndDefinition, p: PolarPoint) -> Result<Vec<f64>> {
    Ok(eval_jet(end, p)?.f)
}

pub fn eval_jet(end: &EndDefinition, p: PolarPoint) -> Result<DerivativeJet> {
    let PolarPoint { r, t } = PolarPoint::new(p.r, p.t)?;
    let mut jet = DerivativeJet::zeros(end.dimension());
    let ln_r = r.ln();
    for (k, form) in end.forms().iter().enumerate() {
        for &(e, c) in form.terms() {
            let p1 = e + 1;
            let w = c * r.powi(p1) * Complex::from_polar(1.0, p1 as f64 * t);
            let ef = e as f64;
            let pf = p1 as f64;
            jet.f[k] += if p1 == 0 {
                c.re * ln_r - c.im * t
            } else {
                w.re / pf
            };
            jet.f_r[k] += w.re / r;
            jet.f_t[k] -= w.im;
            jet.f_rr[k] += ef * w.re / (r * r);
            jet.f_rt[k] -= pf * w.im / r;
            jet.f_tt[k] -= pf * w.re;
        }
    }
    Ok(jet)
}

/// The sums `S_k, T_k, R_k` of the non-top coordinates together with
/// `β(t) = cos((1-n_d)t)/(1-n_d)` and `β'`, for an end in generic normal form
/// `ω_d = (z^{-n_d} + ρ/z) dz`. Also carries `f_t, f_tt, f_r` reassembled from
/// these sums.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeriesView {
    pub n_top: i32,
    pub residue_top: f64,
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub beta: f64,
    pub beta_prime: f64,
    pub f_t: Vec<f64>,
    pub f_tt: Vec<f64>,
    pub f_r: Vec<f64>,
}

pub fn series_view(end: &EndDefinition, p: PolarPoint) -> Result<SeriesView> {
    let (n_top, rho) = generic_normal_form(end)
        .ok_or_else(|| Error::wrong_case("series view needs the generic normal form"))?;
    let PolarPoint { r, t } = PolarPoint::new(p.r, p.t)?;
    let d = end.dimension();
    let mut view = SeriesView {
        n_top,
        residue_top: rho,
        s: vec![0.0; d - 1],
        t: vec![0.0; d - 1],
        r: vec![0.0; d - 1],
        beta: 0.0,
        beta_prime: 0.0,
        f_t: vec![0.0; d],
        f_tt: vec![0.0; d],
        f_r: vec![0.0; d],
    };
    for (k, form) in end.forms()[..d - 1].iter().enumerate() {
        let Some(nk) = form.pole_order() else {
            continue;
        };
        for &(e, c) in form.terms() {
            // j - n_k = e + 1 and r^{j-1} = r^{e + n_k}.
            let q = (e + 1) as f64;
            let rj = r.powi(e + nk);
            let phase = q * t + c.arg();
            if e == -1 {
                view.r[k] += r.powi(nk - 1) * c.re;
            } else {
                let alpha = c.norm() * phase.cos() / q;
                let alpha_prime = -c.norm() * phase.sin();
                view.s[k] += rj * alpha_prime;
                view.t[k] += rj * q * q * alpha;
                view.r[k] += rj * q * alpha;
            }
        }
        let scale = r.powi(1 - nk);
        view.f_t[k] = scale * view.s[k];
        view.f_tt[k] = -scale * view.t[k];
        view.f_r[k] = scale / r * view.r[k];
    }
    let m = (1 - n_top) as f64;
    view.beta = (m * t).cos() / m;
    view.beta_prime = -(m * t).sin();
    let top = r.powi(1 - n_top);
    view.f_t[d - 1] = top * view.beta_prime;
    view.f_tt[d - 1] = -top * m * m * view.beta;
    view.f_r[d - 1] = top / r * (m * view.beta + r.powi(n_top - 1) * rho);
    Ok(view)
}

/// Oriented orthonormal basis of the tangent plane, `e1` along `f_r`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TangentPlane {
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
    /// `e1 × e2`, only in dimension 3.
    pub normal: Option<[f64; 3]>,
}

impl TangentPlane {
    /// Plücker coordinates of `e1 ∧ e2`.
    pub fn plucker(&self) -> Vec<f64> {
        plucker(&self.e1, &self.e2)
    }

    /// Chordal distance between oriented planes in Plücker coordinates.
    pub fn distance(&self, other: &TangentPlane) -> f64 {
        let a = self.plucker();
        let b = other.plucker();
        let diff: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        norm(&diff)
    }
}

pub fn gauss_map(end: &EndDefinition, p: PolarPoint) -> Result<TangentPlane> {
    let jet = eval_jet(end, p)?;
    tangent_plane(&jet, p)
}

pub fn tangent_plane(jet: &DerivativeJet, p: PolarPoint) -> Result<TangentPlane> {
    if jet.normalized_wedge(p.r) < IMMERSION_TOL {
        return Err(Error::DegenerateAtPoint { r: p.r, t: p.t });
    }
    let (e1, e2) =
        orthonormal_pair(&jet.f_r, &jet.f_t).ok_or(Error::DegenerateAtPoint { r: p.r, t: p.t })?;
    let normal = (e1.len() == 3).then(|| {
        [
            e1[1] * e2[2] - e1[2] * e2[1],
            e1[2] * e2[0] - e1[0] * e2[2],
            e1[0] * e2[1] - e1[1] * e2[0],
        ]
    });
    Ok(TangentPlane { e1, e2, normal })
}

pub const DEFAULT_WINDING_SAMPLES: usize = 4096;

/// Winding number around 0 of the circle `t ↦ f(re^{it})` projected onto the
/// limit tangent plane of an independent-top end.
pub fn project_and_wind(end: &EndDefinition, r: f64) -> Result<i64> {
    project_and_wind_with(end, r, DEFAULT_WINDING_SAMPLES)
}

pub fn project_and_wind_with(end: &EndDefinition, r: f64, samples: usize) -> Result<i64> {
    let ty = end_type(end)?;
    if ty.case != EndCase::IndependentTop {
        return Err(Error::wrong_case("winding needs ℝ-independent top coefficients"));
    }
    let (_, top) = end.top_coefficients();
    let re: Vec<f64> = top.iter().map(|c| c.re).collect();
    let im: Vec<f64> = top.iter().map(|c| c.im).collect();
    let (u1, u2) = orthonormal_pair(&re, &im)
        .ok_or_else(|| Error::wrong_case("top coefficients do not span a plane"))?;
    let mut n = samples.max(16);
    loop {
        let mut pts = Vec::with_capacity(n);
        for i in 0..n {
            let t = core::f64::consts::TAU * i as f64 / n as f64;
            let f = eval_point(end, PolarPoint::new(r, t)?)?;
            pts.push((t, dot(&f, &u1), dot(&f, &u2)));
        }
        let radius = pts
            .iter()
            .map(|p| p.1.hypot(p.2))
            .fold(0.0, f64::max);
        if let Some(p) = pts.iter().find(|p| p.1.hypot(p.2) <= 1e-9 * radius) {
            return Err(Error::CurveThroughOrigin { t: p.0 });
        }
        let mut total = 0.0;
        let mut worst = 0.0f64;
        for i in 0..n {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            let step = (a.1 * b.2 - a.2 * b.1).atan2(a.1 * b.1 + a.2 * b.2);
            worst = worst.max(step.abs());
            total += step;
        }
        if worst < core::f64::consts::FRAC_PI_4 || n >= 1 << 22 {
            return Ok((total / core::f64::consts::TAU).round() as i64);
        }
        n *= 2;
    }
}

/// Asymptotic package of a singular angle in the generic and simple-pole cases.
///
/// Coordinate indices `k` are 1-based, matching the usual `ω_1, …, ω_d`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlowupData {
    pub case: EndCase,
    pub n: i32,
    /// `n_d`.
    pub n_top: i32,
    /// `n_k` for `k < d` (simple-pole case: of `ω_k` without its residue term).
    pub pole_orders: Vec<Option<i32>>,
    /// `m_k` for `k < d`; `None` is `∞`.
    pub m: Vec<Option<i32>>,
    pub k_star: Vec<usize>,
    pub b: f64,
    /// `(n_d - 1)/√b`, generic case only.
    pub a: Option<f64>,
    /// Simple-pole case only.
    pub c: Option<f64>,
    /// Whether `c` enters the limit profile, i.e. `d-1 ∈ k*`.
    pub c_active: bool,
}

impl BlowupData {
    /// `-a/(1 + a²s²)`.
    pub fn lorentzian(&self, s: f64) -> Option<f64> {
        self.a.map(|a| -a / (1.0 + a * a * s * s))
    }
}
