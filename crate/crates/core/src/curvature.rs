//! Geodesic curvature of the circles `c_r(t) = f(re^{it})`, Gauss curvature
//! density, total curvature of the puncture, blow-up checks and the
//! Gauss–Bonnet identity on annuli.
//!
//! The integrand `η_r` is smooth away from a few angles where `|f_t|`
//! collapses as `r → 0`. [`circle_integral`] locates those angles as local
//! minima of `|f_t|²`, cuts the circle into sectors around them and
//! integrates each sector in coordinates rotated to put its centre at `u = 0`,
//! on a mesh graded geometrically towards the centre.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::{PI, TAU};

#[allow(unused_imports)]
use num_traits::Float;

use crate::endspec::{blowup_data, end_type, EndCase, EndDefinition};
use crate::extrapolate::{extrapolate_limit, ExtrapolationMethod};
use crate::immersion::{eval_jet, BlowupData, DerivativeJet, PolarPoint};
use crate::linalg::{dot, norm, orthonormal_pair, wedge_dot, wedge_norm};
use crate::quadrature::{gauss_legendre, integrate_adaptive, Integral};
use crate::{Error, Result};

/// `η = -⟨f_t ∧ f_r, f_t ∧ f_tt⟩ / (|f_r ∧ f_t| |f_t|²)`.
pub fn eta_from_jet(jet: &DerivativeJet, p: PolarPoint) -> Result<f64> {
    let wedge = wedge_norm(&jet.f_t, &jet.f_r);
    let ft2 = dot(&jet.f_t, &jet.f_t);
    let num = -wedge_dot(&jet.f_t, &jet.f_r, &jet.f_t, &jet.f_tt);
    let eta = num / (wedge * ft2);
    if wedge == 0.0 || ft2 == 0.0 || !eta.is_finite() {
        return Err(Error::DegenerateAtPoint { r: p.r, t: p.t });
    }
    Ok(eta)
}

pub fn eta(end: &EndDefinition, p: PolarPoint) -> Result<f64> {
    eta_from_jet(&eval_jet(end, p)?, p)
}

/// `|f_t ∧ f_tt| / |f_t|²`, an upper bound for `|η|`.
pub fn eta_bound(jet: &DerivativeJet) -> f64 {
    wedge_norm(&jet.f_t, &jet.f_tt) / dot(&jet.f_t, &jet.f_t)
}

/// Oriented quarter turn in the plane of `X, Y`:
/// `R U = (-⟨U,Y⟩X + ⟨U,X⟩Y)/|X ∧ Y|`.
pub fn rotate90(x: &[f64], y: &[f64], u: &[f64]) -> Result<Vec<f64>> {
    let w = wedge_norm(x, y);
    if !(w > 1e-14 * norm(x) * norm(y)) {
        return Err(Error::DegenerateAtPoint {
            r: f64::NAN,
            t: f64::NAN,
        });
    }
    let a = dot(u, y);
    let b = dot(u, x);
    Ok(x.iter().zip(y).map(|(xi, yi)| (-a * xi + b * yi) / w).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GaussDensity {
    /// Gauss curvature.
    pub k: f64,
    /// Area element `sqrt(EG - F²)` with respect to `dr dt`.
    pub da: f64,
}

/// Gauss equation: `K = (⟨P f_rr, P f_tt⟩ - |P f_rt|²)/(EG - F²)` with `P`
/// the projection onto the normal space.
pub fn gauss_density_from_jet(jet: &DerivativeJet, p: PolarPoint) -> Result<GaussDensity> {
    let degenerate = Error::DegenerateAtPoint { r: p.r, t: p.t };
    let da = wedge_norm(&jet.f_r, &jet.f_t);
    if !(da > 0.0) {
        return Err(degenerate);
    }
    let (e1, e2) = orthonormal_pair(&jet.f_r, &jet.f_t).ok_or(degenerate)?;
    let proj = |x: &[f64]| -> Vec<f64> {
        let a = dot(x, &e1);
        let b = dot(x, &e2);
        x.iter()
            .zip(e1.iter().zip(&e2))
            .map(|(v, (p, q))| v - a * p - b * q)
            .collect()
    };
    let nrr = proj(&jet.f_rr);
    let ntt = proj(&jet.f_tt);
    let nrt = proj(&jet.f_rt);
    let k = (dot(&nrr, &ntt) - dot(&nrt, &nrt)) / (da * da);
    Ok(GaussDensity { k, da })
}

pub fn gauss_density(end: &EndDefinition, p: PolarPoint) -> Result<GaussDensity> {
    gauss_density_from_jet(&eval_jet(end, p)?, p)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct QuadratureConfig {
    /// Uniform panels per full turn before adaptive refinement.
    pub base_panels: usize,
    /// Maximal number of geometric grading levels on each side of a centre.
    pub singularity_refinement_depth: usize,
    pub abs_tol: f64,
    /// Panel budget per sector.
    pub max_segments: usize,
    /// Grid used to locate minima of `|f_t|²`.
    pub detection_grid: usize,
    /// Extra candidate centres, merged with the predicted singular angles.
    pub singular_angles: Vec<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            base_panels: 64,
            singularity_refinement_depth: 60,
            abs_tol: 1e-9,
            max_segments: 20_000,
            detection_grid: 2048,
            singular_angles: Vec::new(),
        }
    }
}

/// Geometric radius ladder `r0 · ratio^j`, `j = 0 … count-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct Ladder {
    pub r0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl Default for Ladder {
    fn default() -> Self {
        Self {
            r0: 0.1,
            ratio: 0.5,
            count: 11,
        }
    }
}

impl Ladder {
    pub fn radii(&self) -> Result<Vec<f64>> {
        if !(self.r0 > 0.0 && self.r0 < 1.0) || !(self.ratio > 0.0 && self.ratio < 1.0) || self.count < 2 {
            return Err(Error::domain("ladder needs r0, ratio in (0, 1) and count >= 2"));
        }
        Ok((0..self.count)
            .map(|j| self.r0 * self.ratio.powi(j as i32))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct CurvatureConfig {
    pub quadrature: QuadratureConfig,
    pub ladder: Ladder,
    /// Tolerance on `|extrapolated - predicted|` for `converged`.
    pub limit_tol: f64,
}

impl Default for CurvatureConfig {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            ladder: Ladder::default(),
            limit_tol: 1e-2,
        }
    }
}

fn ft_sq(end: &EndDefinition, r: f64, t: f64) -> f64 {
    eval_jet(end, PolarPoint { r, t }).map_or(0.0, |j| dot(&j.f_t, &j.f_t))
}

fn ft_dot_ftt(end: &EndDefinition, r: f64, u: f64) -> f64 {
    eval_jet(end, PolarPoint { r, t: u }).map_or(0.0, |j| dot(&j.f_t, &j.f_tt))
}

/// Refines a candidate to a zero of `d|f_t|²/dt` in `[t - h, t + h]` where it
/// changes sign from `-` to `+`; `None` without such a bracket.
fn refine_centre(end: &EndDefinition, r: f64, t: f64, h: f64) -> Option<f64> {
    let local = end.rotate_domain(t);
    let (mut lo, mut hi) = (-h, h);
    if !(ft_dot_ftt(&local, r, lo) < 0.0 && ft_dot_ftt(&local, r, hi) > 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ft_dot_ftt(&local, r, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(crate::wrap_angle(t + 0.5 * (lo + hi)))
}

/// Angles on the circle of radius `r` where `|f_t|²` has a pronounced local
/// minimum, sorted in `[0, 2π)`.
pub fn find_centres(end: &EndDefinition, r: f64, cfg: &QuadratureConfig) -> Vec<f64> {
    let n = cfg.detection_grid.max(16);
    let h = TAU / n as f64;
    let g: Vec<f64> = (0..n).map(|i| ft_sq(end, r, h * i as f64)).collect();
    let gmax = g.iter().copied().fold(0.0, f64::max);
    let mut centres = Vec::new();
    for i in 0..n {
        let prev = g[(i + n - 1) % n];
        let next = g[(i + 1) % n];
        if g[i] < prev && g[i] <= next && g[i] < 0.25 * gmax {
            let t = h * i as f64;
            centres.push(refine_centre(end, r, t, h).unwrap_or(t));
        }
    }
    let mut seeds = end.singular_angles();
    seeds.extend(cfg.singular_angles.iter().copied());
    for t in seeds {
        if ft_sq(end, r, t) < 0.25 * gmax {
            if let Some(c) = refine_centre(end, r, crate::wrap_angle(t), h) {
                centres.push(c);
            }
        }
    }
    centres.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<f64> = Vec::with_capacity(centres.len());
    for c in centres {
        if out.last().is_none_or(|&l| c - l > 1e-9) {
            out.push(c);
        }
    }
    if out.len() > 1 && out[0] + TAU - out[out.len() - 1] <= 1e-9 {
        out.pop();
    }
    out
}

/// `∫_{lo}^{hi} η_r(u) du` for the end `local` whose singular angle (if any)
/// sits at `u = 0`; `width` is the expected spike width.
fn sector_integral(
    local: &EndDefinition,
    r: f64,
    lo: f64,
    hi: f64,
    width: Option<f64>,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    let mut bp = vec![lo, hi];
    let spacing = TAU / cfg.base_panels.max(1) as f64;
    let mut j = (lo / spacing).ceil() as i64;
    while (j as f64) * spacing < hi {
        bp.push(j as f64 * spacing);
        j += 1;
    }
    if let Some(w) = width {
        let half = (hi - lo) / 8.0;
        let mut w = w.clamp(1e-15, half.max(1e-15));
        bp.push(0.0);
        for _ in 0..cfg.singularity_refinement_depth {
            if w >= hi && -w <= lo {
                break;
            }
            if w < hi {
                bp.push(w);
            }
            if -w > lo {
                bp.push(-w);
            }
            w *= 2.0;
        }
    }
    bp.retain(|&x| x >= lo && x <= hi);
    bp.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bp.dedup();
    integrate_adaptive(
        |u| eta(local, PolarPoint { r, t: u }),
        &bp,
        tol,
        cfg.max_segments,
    )
}

fn spike_width(local: &EndDefinition, r: f64, hint_n: Option<i32>) -> f64 {
    let est = eval_jet(local, PolarPoint { r, t: 0.0 })
        .map(|j| 0.25 * norm(&j.f_t) / norm(&j.f_tt))
        .unwrap_or(0.0);
    let est = if est.is_finite() { est } else { 0.0 };
    match hint_n {
        Some(n) if n >= 1 => est.min(r.powi(n)),
        _ => est,
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CircleIntegral {
    pub r: f64,
    pub value: f64,
    pub error: f64,
    pub centres: Vec<f64>,
    pub segments: usize,
    pub evaluations: usize,
}

/// `I(r) = ∫_0^{2π} η_r(t) dt` with an error estimate and the sector centres used.
pub fn circle_integral(end: &EndDefinition, r: f64, cfg: &QuadratureConfig) -> Result<CircleIntegral> {
    PolarPoint::new(r, 0.0)?;
    if !(cfg.abs_tol > 0.0) {
        return Err(Error::domain("abs_tol must be positive"));
    }
    let centres = find_centres(end, r, cfg);
    let hint_n = blowup_data(end).ok().map(|b| b.n);
    let mut out = CircleIntegral {
        r,
        value: 0.0,
        error: 0.0,
        centres: centres.clone(),
        segments: 0,
        evaluations: 0,
    };
    if centres.is_empty() {
        let res = sector_integral(end, r, 0.0, TAU, None, cfg.abs_tol, cfg)?;
        out.value = res.value;
        out.error = res.error;
        out.segments = res.segments;
        out.evaluations = res.evaluations;
        return Ok(out);
    }
    let m = centres.len();
    for i in 0..m {
        let c = centres[i];
        let (lo, hi) = if m == 1 {
            (-PI, PI)
        } else {
            let prev = if i == 0 { centres[m - 1] - TAU } else { centres[i - 1] };
            let next = if i + 1 == m { centres[0] + TAU } else { centres[i + 1] };
            (0.5 * (prev - c), 0.5 * (next - c))
        };
        let local = end.rotate_domain(c);
        let width = spike_width(&local, r, hint_n);
        let tol = cfg.abs_tol * (hi - lo) / TAU;
        let res = sector_integral(&local, r, lo, hi, Some(width), tol, cfg)?;
        out.value += res.value;
        out.error += res.error;
        out.segments += res.segments;
        out.evaluations += res.evaluations;
    }
    Ok(out)
}

pub fn total_geodesic_curvature(end: &EndDefinition, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(circle_integral(end, r, cfg)?.value)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CurvatureReport {
    pub label: String,
    pub pole_orders: Vec<Option<i32>>,
    pub radii: Vec<f64>,
    pub totals: Vec<f64>,
    pub quadrature_errors: Vec<f64>,
    pub extrapolated: f64,
    pub method: ExtrapolationMethod,
    pub ratio: Option<f64>,
    /// Change of the extrapolated value when the last radius is dropped.
    pub achieved_tolerance: f64,
    pub predicted: f64,
    pub deviation: f64,
    pub limit_tol: f64,
    pub converged: bool,
}

impl CurvatureReport {
    /// Assembles the report from per-radius circle integrals (radii decreasing).
    pub fn from_circles(
        end: &EndDefinition,
        circles: &[CircleIntegral],
        limit_tol: f64,
    ) -> Result<Self> {
        let ty = end_type(end)?;
        let totals: Vec<f64> = circles.iter().map(|c| c.value).collect();
        let ex = extrapolate_limit(&totals).ok_or_else(|| Error::domain("empty radius ladder"))?;
        let predicted = ty.predicted_curvature();
        let deviation = (ex.value - predicted).abs();
        Ok(Self {
            label: end.label().into(),
            pole_orders: ty.pole_orders,
            radii: circles.iter().map(|c| c.r).collect(),
            totals,
            quadrature_errors: circles.iter().map(|c| c.error).collect(),
            extrapolated: ex.value,
            method: ex.method,
            ratio: ex.ratio,
            achieved_tolerance: ex.error_estimate,
            predicted,
            deviation,
            limit_tol,
            converged: deviation < limit_tol,
        })
    }
}

/// `I(r)` on the ladder, extrapolated to `r → 0` and compared with
/// `-2π(max n_k - 1)` of the reduced type.
pub fn puncture_curvature(end: &EndDefinition, cfg: &CurvatureConfig) -> Result<CurvatureReport> {
    let radii = cfg.ladder.radii()?;
    let circles = radii
        .iter()
        .map(|&r| circle_integral(end, r, &cfg.quadrature))
        .collect::<Result<Vec<_>>>()?;
    CurvatureReport::from_circles(end, &circles, cfg.limit_tol)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct BlowupConfig {
    pub radii: Vec<f64>,
    /// Half-width `S` of the blown-up window `s ∈ [-S, S]`.
    pub s_max: f64,
    pub s_samples: usize,
    pub quadrature: QuadratureConfig,
}

impl Default for BlowupConfig {
    fn default() -> Self {
        Self {
            radii: vec![1e-2, 1e-3, 1e-4],
            s_max: 50.0,
            s_samples: 2001,
            quadrature: QuadratureConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlowupRow {
    pub r: f64,
    /// `sup_s |r^n η_r(r^n s) - profile(s)|` at `t = 0`.
    pub sup_deviation: f64,
    /// `∫_{-ε}^{ε} η_r dt`.
    pub singular_integral: f64,
    pub singular_integral_error: f64,
    /// Smallest `M` with `r^n |η_r(r^n s)| ≤ M(|s|^p + 1)/(1 + s²)` on the grid.
    pub fitted_m: Option<f64>,
    /// Smallest `r^{2(n_d-1)} |f_t|² / (r^{2n} + t²)` on the grid.
    pub fitted_mu: Option<f64>,
    /// Simple-pole case: the same at `t = π`.
    pub sup_deviation_pi: Option<f64>,
    pub singular_integral_pi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlowupReport {
    pub label: String,
    pub data: BlowupData,
    pub epsilon: f64,
    pub s_max: f64,
    /// `∫_ℝ` of the limit profile at `t = 0` (`-π` in the generic case).
    pub expected_integral: f64,
    pub expected_integral_pi: Option<f64>,
    pub rows: Vec<BlowupRow>,
    pub deviations_decreasing: bool,
}

/// Limit profile of `r^n η_r(r^n s)` at `t = 0` in the simple-pole case.
pub fn simple_pole_profile(data: &BlowupData, s: f64) -> f64 {
    let b = data.b;
    match data.c {
        Some(c) if data.c_active => (b - c * s) / ((2.0 * b - 2.0 * c * s - c * c + s * s).sqrt() * (b + s * s)),
        _ => b / ((2.0 * b + s * s).sqrt() * (b + s * s)),
    }
}

fn profile_mass(data: &BlowupData) -> Result<f64> {
    // s = tan(θ) maps ℝ onto (-π/2, π/2).
    let half = PI / 2.0;
    let res = integrate_adaptive(
        |th: f64| {
            let s = th.tan();
            Ok(simple_pole_profile(data, s) * (1.0 + s * s))
        },
        &[-half, -1.0, 0.0, 1.0, half],
        1e-12,
        10_000,
    )?;
    Ok(res.value)
}

/// Compares the blown-up integrand with its limit profile on a ladder of
/// radii and integrates each singularity over `(-ε, ε)`.
pub fn blowup_check(end: &EndDefinition, cfg: &BlowupConfig) -> Result<BlowupReport> {
    let data = blowup_data(end)?;
    if data.n < 1 {
        return Err(Error::wrong_case("blow-up exponent n must be at least 1"));
    }
    let nd = data.n_top;
    let n = data.n;
    let eps = 0.5 * if nd >= 2 { (PI / (2.0 * (nd - 1) as f64)).min(1.0) } else { 1.0 };
    let k = cfg.s_samples.max(3);
    let grid: Vec<f64> = (0..k)
        .map(|j| -cfg.s_max + 2.0 * cfg.s_max * j as f64 / (k - 1) as f64)
        .collect();
    let generic = data.case == EndCase::Generic;
    let n_sub = data.pole_orders.iter().flatten().copied().max().unwrap_or(0);
    let p_exp = (n - nd + n_sub) as f64 / n as f64;
    let at_pi = end.rotate_domain(PI);
    let sign_pi = if n % 2 == 0 { 1.0 } else { -1.0 };

    let mut rows = Vec::with_capacity(cfg.radii.len());
    for &r in &cfg.radii {
        let rn = r.powi(n);
        let mut sup = 0.0f64;
        let mut sup_pi = 0.0f64;
        let mut m_fit = 0.0f64;
        let mut mu_fit = f64::INFINITY;
        for &s in &grid {
            let p = PolarPoint::new(r, rn * s)?;
            let jet = eval_jet(end, p)?;
            let v = rn * eta_from_jet(&jet, p)?;
            let target = if generic {
                data.lorentzian(s).unwrap()
            } else {
                simple_pole_profile(&data, s)
            };
            sup = sup.max((v - target).abs());
            if generic {
                m_fit = m_fit.max(v.abs() * (1.0 + s * s) / (s.abs().powf(p_exp) + 1.0));
                let ft2 = dot(&jet.f_t, &jet.f_t);
                mu_fit = mu_fit.min(r.powi(2 * (nd - 1)) * ft2 / (rn * rn * (1.0 + s * s)));
            } else {
                let q = PolarPoint::new(r, sign_pi * rn * s)?;
                let w = rn * eta(&at_pi, q)?;
                sup_pi = sup_pi.max((w + target).abs());
            }
        }
        let width = Some(rn);
        let tol = cfg.quadrature.abs_tol;
        let zero = sector_integral(end, r, -eps, eps, width, tol, &cfg.quadrature)?;
        let pi_int = if generic {
            None
        } else {
            Some(sector_integral(&at_pi, r, -eps, eps, width, tol, &cfg.quadrature)?.value)
        };
        rows.push(BlowupRow {
            r,
            sup_deviation: sup,
            singular_integral: zero.value,
            singular_integral_error: zero.error,
            fitted_m: generic.then_some(m_fit),
            fitted_mu: generic.then_some(mu_fit),
            sup_deviation_pi: (!generic).then_some(sup_pi),
            singular_integral_pi: pi_int,
        });
    }
    let deviations_decreasing = rows.windows(2).all(|w| w[1].sup_deviation < w[0].sup_deviation);
    let (expected_integral, expected_integral_pi) = if generic {
        (-PI, None)
    } else {
        let mass = profile_mass(&data)?;
        (mass, Some(-mass))
    };
    Ok(BlowupReport {
        label: end.label().into(),
        data,
        epsilon: eps,
        s_max: cfg.s_max,
        expected_integral,
        expected_integral_pi,
        rows,
        deviations_decreasing,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AreaIntegral {
    pub value: f64,
    /// Difference to the same rule at half the resolution.
    pub error: f64,
}

fn area_rule(end: &EndDefinition, r1: f64, r2: f64, panels: usize, nodes: usize, nt: usize) -> Result<f64> {
    let (x, w) = gauss_legendre(nodes);
    let ratio = (r2 / r1).powf(1.0 / panels as f64);
    let mut total = 0.0;
    let mut a = r1;
    for i in 0..panels {
        let b = if i + 1 == panels { r2 } else { a * ratio };
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (xi, wi) in x.iter().zip(&w) {
            let r = mid + half * xi;
            let mut ring = 0.0;
            for j in 0..nt {
                let t = TAU * j as f64 / nt as f64;
                let g = gauss_density(end, PolarPoint::new(r, t)?)?;
                ring += g.k * g.da;
            }
            total += wi * half * ring * TAU / nt as f64;
        }
        a = b;
    }
    Ok(total)
}

/// `∫_{r1}^{r2} ∫_0^{2π} K dA`: Gauss–Legendre on geometric panels in `r`,
/// trapezoid (spectrally accurate for periodic integrands) in `t`.
pub fn annulus_area_integral(end: &EndDefinition, r1: f64, r2: f64) -> Result<AreaIntegral> {
    if !(r1 > 0.0 && r2 > r1) {
        return Err(Error::domain("annulus needs 0 < r1 < r2"));
    }
    let panels = ((r2 / r1).ln() / 0.25f64.ln().abs()).ceil().max(4.0) as usize;
    let coarse = area_rule(end, r1, r2, panels, 12, 256)?;
    let fine = area_rule(end, r1, r2, panels, 24, 512)?;
    Ok(AreaIntegral {
        value: fine,
        error: (fine - coarse).abs(),
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GaussBonnetReport {
    pub label: String,
    pub r_inner: f64,
    pub r_outer: f64,
    pub inner_total: f64,
    pub outer_total: f64,
    pub area_integral: f64,
    pub area_error: f64,
    /// `I(r_inner) - I(r_outer) - ∫_A K dA`.
    pub residual: f64,
}

pub fn gauss_bonnet_annulus(
    end: &EndDefinition,
    r_inner: f64,
    r_outer: f64,
    cfg: &QuadratureConfig,
) -> Result<GaussBonnetReport> {
    let area = annulus_area_integral(end, r_inner, r_outer)?;
    let inner_total = total_geodesic_curvature(end, r_inner, cfg)?;
    let outer_total = total_geodesic_curvature(end, r_outer, cfg)?;
    Ok(GaussBonnetReport {
        label: end.label().into(),
        r_inner,
        r_outer,
        inner_total,
        outer_total,
        area_integral: area.value,
        area_error: area.error,
        residual: inner_total - outer_total - area.value,
    })
}
