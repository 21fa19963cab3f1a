//! End definitions, validation, affine reduction to the type of the end,
//! case classification and blow-up data.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::immersion::{eval_jet, BlowupData, PolarPoint, IMMERSION_TOL};
use crate::linalg::Matrix;
use crate::series::{LaurentForm, PowerSeries};
use crate::{Complex, Error, Result};

/// Two leading coefficients are ℝ-dependent when their real 2×2 determinant
/// is below this multiple of the product of their magnitudes.
pub const INDEPENDENCE_TOL: f64 = 1e-9;

/// A residue counts as real when `|Im| < RESIDUE_TOL · max(1, |form|)`.
pub const RESIDUE_TOL: f64 = 1e-12;

/// Relative size below which a cancelled coefficient is set to zero.
pub const CANCEL_TOL: f64 = 1e-12;

/// Relative size below which an imaginary part counts as zero when reading `m_k`.
pub const IMAG_TOL: f64 = 1e-12;

/// `d` coordinate forms `ω_1, …, ω_d` describing `f = Re ∫ (ω_1, …, ω_d)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EndDefinition {
    label: String,
    forms: Vec<LaurentForm>,
}

impl EndDefinition {
    /// Needs `d ≥ 2` forms, not all zero.
    pub fn new(label: impl Into<String>, forms: Vec<LaurentForm>) -> Result<Self> {
        if forms.len() < 2 {
            return Err(Error::InvalidEnd(alloc::format!(
                "need at least 2 forms, got {}",
                forms.len()
            )));
        }
        if forms.iter().all(LaurentForm::is_zero) {
            return Err(Error::InvalidEnd("every form is zero".into()));
        }
        Ok(Self {
            label: label.into(),
            forms,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dimension(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[LaurentForm] {
        &self.forms
    }

    pub fn pole_orders(&self) -> Vec<Option<i32>> {
        self.forms.iter().map(LaurentForm::pole_order).collect()
    }

    /// `max_k n_k` over the nonzero forms.
    pub fn max_pole_order(&self) -> i32 {
        self.forms
            .iter()
            .filter_map(LaurentForm::pole_order)
            .max()
            .expect("an end has a nonzero form")
    }

    /// `(n, A)` with `n` the maximal pole order and `A_k` the coefficient of
    /// `z^{-n}` in `ω_k`.
    pub fn top_coefficients(&self) -> (i32, Vec<Complex>) {
        let n = self.max_pole_order();
        (n, self.forms.iter().map(|f| f.coeff(-n)).collect())
    }

    /// The first form (1-based index) whose residue is not real.
    pub fn check_residues(&self) -> Result<()> {
        for (k, form) in self.forms.iter().enumerate() {
            let res = form.residue();
            if res.im.abs() >= RESIDUE_TOL * form.max_abs().max(1.0) {
                return Err(Error::ResidueNotReal {
                    index: k + 1,
                    imag: res.im,
                });
            }
        }
        Ok(())
    }

    /// Forms `Σ_j m_ij ω_j`, i.e. the end `M ∘ f`.
    pub fn recombine(&self, m: &Matrix) -> Result<Self> {
        if m.dim() != self.dimension() {
            return Err(Error::domain("matrix size does not match the dimension"));
        }
        let forms = m
            .rows
            .iter()
            .map(|row| LaurentForm::linear_combination(row, &self.forms))
            .collect();
        Self::new(self.label.clone(), forms)
    }

    /// The end precomposed with `z ↦ e^{iθ} z`.
    pub fn rotate_domain(&self, theta: f64) -> Self {
        self.map_forms(|f| f.rotate_domain(theta))
    }

    /// The end precomposed with `z ↦ λ z`.
    pub fn scale_domain(&self, lambda: Complex) -> Self {
        self.map_forms(|f| f.scale_domain(lambda))
    }

    /// The end precomposed with the germ `φ`; every form is truncated to its
    /// known coefficients and coefficients with `|c| ≤ tol` are dropped.
    pub fn pullback(&self, phi: &PowerSeries, tol: f64) -> Result<Self> {
        let forms = self
            .forms
            .iter()
            .map(|f| {
                if f.is_zero() {
                    Ok(LaurentForm::zero())
                } else {
                    f.pullback(phi).map(|s| s.to_form(tol))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.label.clone(), forms)
    }

    fn map_forms(&self, g: impl Fn(&LaurentForm) -> LaurentForm) -> Self {
        Self {
            label: self.label.clone(),
            forms: self.forms.iter().map(g).collect(),
        }
    }

    /// Angles where `|f_t|` is predicted to collapse as `r → 0` when the top
    /// coefficients are ℝ-dependent: `(arg a + kπ)/(n - 1)` for the largest
    /// top coefficient `a`, `k = 0 … 2n-3`. Empty for `n < 2`.
    pub fn singular_angles(&self) -> Vec<f64> {
        let (n, top) = self.top_coefficients();
        if n < 2 {
            return Vec::new();
        }
        let a = top
            .iter()
            .copied()
            .fold(Complex::zero(), |acc, c| if c.norm() > acc.norm() { c } else { acc });
        (0..2 * (n - 1))
            .map(|k| {
                let t = (a.arg() + k as f64 * core::f64::consts::PI) / (n - 1) as f64;
                crate::wrap_angle(t)
            })
            .collect()
    }
}

/// One finding of [`validate`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind"))]
pub enum ValidationIssue {
    /// `index` is 1-based.
    ResidueNotReal { index: usize, imag: f64 },
    DegenerateAtPoint { r: f64, t: f64, wedge: f64 },
}

impl ValidationIssue {
    pub fn to_error(&self) -> Error {
        match *self {
            ValidationIssue::ResidueNotReal { index, imag } => Error::ResidueNotReal { index, imag },
            ValidationIssue::DegenerateAtPoint { r, t, .. } => Error::DegenerateAtPoint { r, t },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationReport {
    pub label: String,
    pub valid: bool,
    pub issues: Vec<ValidationIssue>,
    /// Points at which the differential was evaluated.
    pub samples: usize,
    /// Smallest normalized wedge `2|f_r ∧ f_t/r|/(|f_r|² + |f_t/r|²)` seen.
    pub min_wedge: Option<f64>,
    pub min_wedge_at: Option<PolarPoint>,
}

impl ValidationReport {
    pub fn into_result(self) -> Result<()> {
        match self.issues.first() {
            Some(issue) => Err(issue.to_error()),
            None => Ok(()),
        }
    }
}

pub const VALIDATION_R_MIN: f64 = 1e-3;
pub const VALIDATION_R_MAX: f64 = 0.9;

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut x = 0.0;
    while i > 0 {
        x += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    x
}

/// Checks real residues and samples the immersion condition.
///
/// The sample set is `samples` Halton points, log-uniform in
/// `r ∈ [1e-3, 0.9]`, plus every predicted singular angle at five radii.
pub fn validate(end: &EndDefinition, samples: usize) -> ValidationReport {
    let mut issues = Vec::new();
    for (k, form) in end.forms().iter().enumerate() {
        let res = form.residue();
        if res.im.abs() >= RESIDUE_TOL * form.max_abs().max(1.0) {
            issues.push(ValidationIssue::ResidueNotReal {
                index: k + 1,
                imag: res.im,
            });
        }
    }
    let mut report = ValidationReport {
        label: end.label().into(),
        valid: issues.is_empty(),
        issues,
        samples: 0,
        min_wedge: None,
        min_wedge_at: None,
    };
    if !report.valid {
        return report;
    }

    let span = (VALIDATION_R_MAX / VALIDATION_R_MIN).ln();
    let mut points: Vec<PolarPoint> = (1..=samples)
        .map(|i| PolarPoint {
            r: VALIDATION_R_MIN * (span * radical_inverse(i, 2)).exp(),
            t: core::f64::consts::TAU * radical_inverse(i, 3),
        })
        .collect();
    for t in end.singular_angles() {
        for r in [1e-3, 1e-2, 0.1, 0.5, 0.9] {
            points.push(PolarPoint { r, t });
        }
    }

    let mut worst: Option<(f64, PolarPoint)> = None;
    for p in &points {
        let nu = match eval_jet(end, *p) {
            Ok(jet) => jet.normalized_wedge(p.r),
            Err(_) => 0.0,
        };
        if worst.is_none_or(|(w, _)| nu < w) {
            worst = Some((nu, *p));
        }
    }
    report.samples = points.len();
    if let Some((w, p)) = worst {
        report.min_wedge = Some(w);
        report.min_wedge_at = Some(p);
        if !(w >= IMMERSION_TOL) {
            report.issues.push(ValidationIssue::DegenerateAtPoint {
                r: p.r,
                t: p.t,
                wedge: w,
            });
            report.valid = false;
        }
    }
    report
}

/// The case split by the reduced type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EndCase {
    /// `n_{d-1} = n_d ≥ 2` with ℝ-independent top coefficients.
    #[cfg_attr(feature = "serde", serde(rename = "CaseI_IndependentTop"))]
    IndependentTop,
    /// `n_{d-1} < n_d`, `n_d ≥ 2`.
    #[cfg_attr(feature = "serde", serde(rename = "CaseII_Generic"))]
    Generic,
    /// `n_{d-1} < n_d = 1`.
    #[cfg_attr(feature = "serde", serde(rename = "CaseIII_SimplePoleTop"))]
    SimplePoleTop,
    /// `max n_k ≤ 0`.
    SmoothPoint,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EndType {
    /// Nondecreasing; `None` marks a row reduced to the zero form and sorts first.
    pub pole_orders: Vec<Option<i32>>,
    pub case: EndCase,
}

impl EndType {
    pub fn max_pole_order(&self) -> i32 {
        self.pole_orders.iter().flatten().copied().max().unwrap_or(i32::MIN)
    }

    /// `-2π (max n_k - 1)`.
    pub fn predicted_curvature(&self) -> f64 {
        core::f64::consts::TAU * (1 - self.max_pole_order()) as f64
    }
}

/// Classifies the end by its reduced type. Residues must be real.
pub fn end_type(end: &EndDefinition) -> Result<EndType> {
    end.check_residues()?;
    let red = reduce(end)?;
    Ok(classify_reduced(&red.reduced))
}

fn classify_reduced(reduced: &EndDefinition) -> EndType {
    let pole_orders = reduced.pole_orders();
    let d = pole_orders.len();
    let nd = pole_orders[d - 1].unwrap_or(i32::MIN);
    let case = if nd <= 0 {
        EndCase::SmoothPoint
    } else if nd == 1 {
        EndCase::SimplePoleTop
    } else if pole_orders[d - 2] == Some(nd) {
        EndCase::IndependentTop
    } else {
        EndCase::Generic
    };
    EndType { pole_orders, case }
}

/// One step of the reduction certificate. Row indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "step"))]
pub enum ReductionStep {
    /// Orthogonal reflection sending the real direction `direction` of the
    /// ℝ-dependent top coefficients onto the last axis.
    Householder { level: i32, direction: Vec<f64> },
    /// `row[target] -= Σ multipliers_i · row[pivots_i]`, dropping its pole order
    /// below `level`.
    Eliminate {
        level: i32,
        target: usize,
        pivots: Vec<usize>,
        multipliers: Vec<f64>,
    },
    /// New row `i` is old row `order[i]`.
    Permute { order: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AffineReduction {
    pub matrix: Matrix,
    pub reduced: EndDefinition,
    pub certificate: Vec<ReductionStep>,
    /// Largest coefficient difference between `matrix · ω` and the reduced forms.
    pub reconstruction_error: f64,
}

/// Greedy real elimination of leading terms from the highest pole order down,
/// preceded by an orthogonal split when the top coefficients are ℝ-dependent.
pub fn reduce(end: &EndDefinition) -> Result<AffineReduction> {
    let d = end.dimension();
    let mut rows = end.forms().to_vec();
    let mut matrix = Matrix::identity(d);
    let mut certificate = Vec::new();

    if let Some(step) = orthogonal_top_split(&mut rows, &mut matrix)? {
        certificate.push(step);
    }
    while let Some(step) = eliminate_once(&mut rows, &mut matrix)? {
        certificate.push(step);
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by_key(|&i| rows[i].pole_order());
    if order.iter().enumerate().any(|(i, &j)| i != j) {
        rows = order.iter().map(|&i| rows[i].clone()).collect();
        matrix = Matrix::permutation(&order).mul(&matrix);
        certificate.push(ReductionStep::Permute { order });
    }

    let reduced = EndDefinition::new(end.label(), rows)?;
    let reconstruction_error = end
        .recombine(&matrix)
        .map(|e| max_form_diff(e.forms(), reduced.forms()))
        .unwrap_or(f64::INFINITY);
    Ok(AffineReduction {
        matrix,
        reduced,
        certificate,
        reconstruction_error,
    })
}

/// Largest coefficient difference between two lists of forms.
pub fn max_form_diff(a: &[LaurentForm], b: &[LaurentForm]) -> f64 {
    let mut worst = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        for &(e, c) in x.terms() {
            worst = worst.max((c - y.coeff(e)).norm());
        }
        for &(e, c) in y.terms() {
            worst = worst.max((c - x.coeff(e)).norm());
        }
    }
    worst
}

/// `Σ_i w_i rows[i]`, with coefficients that cancel to within `CANCEL_TOL`
/// of the magnitudes that produced them set to zero.
fn combine_clean(weights: &[f64], rows: &[LaurentForm]) -> LaurentForm {
    let mut acc: Vec<(i32, Complex, f64)> = Vec::new();
    for (w, row) in weights.iter().zip(rows) {
        if *w == 0.0 {
            continue;
        }
        for &(e, c) in row.terms() {
            match acc.binary_search_by_key(&e, |t| t.0) {
                Ok(i) => {
                    acc[i].1 += c * *w;
                    acc[i].2 += c.norm() * w.abs();
                }
                Err(i) => acc.insert(i, (e, c * *w, c.norm() * w.abs())),
            }
        }
    }
    LaurentForm::from_sorted(
        acc.into_iter()
            .filter(|t| t.1.norm() > CANCEL_TOL * t.2)
            .map(|t| (t.0, t.1))
            .collect(),
    )
}

fn dependence_ratio(a: Complex, b: Complex) -> f64 {
    (a * b.conj()).im.abs() / (a.norm() * b.norm())
}

fn rows_at_level(rows: &[LaurentForm], level: i32) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..rows.len())
        .filter(|&i| rows[i].pole_order() == Some(level))
        .collect();
    idx.sort_by(|&i, &j| {
        let a = rows[i].leading().unwrap().1.norm();
        let b = rows[j].leading().unwrap().1.norm();
        b.partial_cmp(&a).unwrap().then(i.cmp(&j))
    });
    idx
}

fn orthogonal_top_split(
    rows: &mut Vec<LaurentForm>,
    matrix: &mut Matrix,
) -> Result<Option<ReductionStep>> {
    let d = rows.len();
    let Some(level) = rows.iter().filter_map(LaurentForm::pole_order).max() else {
        return Ok(None);
    };
    let idx = rows_at_level(rows, level);
    if idx.len() < 2 {
        return Ok(None);
    }
    let a_ref = rows[idx[0]].leading().unwrap().1;
    let mut s = vec![0.0; d];
    for &j in &idx {
        let a = rows[j].leading().unwrap().1;
        if dependence_ratio(a, a_ref) >= INDEPENDENCE_TOL {
            return Ok(None);
        }
        s[j] = (a * a_ref.conj()).re / a_ref.norm_sqr();
    }
    let h = Matrix::householder_onto_axis(&s, d - 1);
    let new_rows: Vec<LaurentForm> = h.rows.iter().map(|w| combine_clean(w, rows)).collect();
    for (i, row) in new_rows.iter().enumerate() {
        if i != d - 1 && row.pole_order() == Some(level) {
            return Err(Error::NumericalRankFailure {
                level,
                ratio: row.leading().unwrap().1.norm() / a_ref.norm(),
            });
        }
    }
    *rows = new_rows;
    *matrix = h.mul(matrix);
    Ok(Some(ReductionStep::Householder {
        level,
        direction: s,
    }))
}

fn eliminate_once(
    rows: &mut [LaurentForm],
    matrix: &mut Matrix,
) -> Result<Option<ReductionStep>> {
    let mut levels: Vec<i32> = rows.iter().filter_map(LaurentForm::pole_order).collect();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    levels.dedup();
    for level in levels {
        let idx = rows_at_level(rows, level);
        let mut kept: Vec<usize> = Vec::new();
        for &j in &idx {
            let a = rows[j].leading().unwrap().1;
            let (pivots, multipliers) = match kept.len() {
                0 => {
                    kept.push(j);
                    continue;
                }
                1 => {
                    let b = rows[kept[0]].leading().unwrap().1;
                    if dependence_ratio(a, b) >= INDEPENDENCE_TOL {
                        kept.push(j);
                        continue;
                    }
                    (vec![kept[0]], vec![(a * b.conj()).re / b.norm_sqr()])
                }
                _ => {
                    let b1 = rows[kept[0]].leading().unwrap().1;
                    let b2 = rows[kept[1]].leading().unwrap().1;
                    let det = b1.re * b2.im - b2.re * b1.im;
                    let x = (a.re * b2.im - b2.re * a.im) / det;
                    let y = (b1.re * a.im - a.re * b1.im) / det;
                    (kept.clone(), vec![x, y])
                }
            };
            let mut weights = vec![0.0; rows.len()];
            weights[j] = 1.0;
            for (&p, &m) in pivots.iter().zip(&multipliers) {
                weights[p] = -m;
            }
            let new_row = combine_clean(&weights, rows);
            if new_row.pole_order().is_some_and(|o| o >= level) {
                let leftover = new_row.coeff(-level).norm();
                return Err(Error::NumericalRankFailure {
                    level,
                    ratio: leftover / a.norm(),
                });
            }
            rows[j] = new_row;
            let new_matrix_row: Vec<f64> = (0..rows.len())
                .map(|c| {
                    let mut v = matrix.rows[j][c];
                    for (&p, &m) in pivots.iter().zip(&multipliers) {
                        v -= m * matrix.rows[p][c];
                    }
                    v
                })
                .collect();
            matrix.rows[j] = new_matrix_row;
            return Ok(Some(ReductionStep::Eliminate {
                level,
                target: j,
                pivots,
                multipliers,
            }));
        }
    }
    Ok(None)
}

/// `Some((n_d, ρ))` when `ω_d = (z^{-n_d} + ρ/z) dz` with `n_d ≥ 2`, real `ρ`,
/// and every other form has pole order below `n_d`.
pub fn generic_normal_form(end: &EndDefinition) -> Option<(i32, f64)> {
    let d = end.dimension();
    let top = &end.forms()[d - 1];
    let n = top.pole_order()?;
    if n < 2 || (top.coeff(-n) - Complex::new(1.0, 0.0)).norm() > 1e-12 {
        return None;
    }
    if top.terms().iter().any(|t| t.0 != -n && t.0 != -1) {
        return None;
    }
    let rho = top.residue();
    if rho.im.abs() > RESIDUE_TOL * rho.norm().max(1.0) {
        return None;
    }
    let others_below = end.forms()[..d - 1]
        .iter()
        .all(|f| f.pole_order().is_none_or(|o| o < n));
    others_below.then_some((n, rho.re))
}

/// Whether `ω_d = (1/z + 1) dz` and every other form has pole order at most 1.
pub fn simple_pole_normal_form(end: &EndDefinition) -> bool {
    let d = end.dimension();
    let top = &end.forms()[d - 1];
    let one = Complex::new(1.0, 0.0);
    top.terms().len() == 2
        && (top.coeff(-1) - one).norm() <= 1e-12
        && (top.coeff(0) - one).norm() <= 1e-12
        && end.forms()[..d - 1]
            .iter()
            .all(|f| f.pole_order().is_none_or(|o| o <= 1))
}

/// `m_k` of a form with pole order `n_k`: the least `j = e + 1 + n_k` whose
/// coefficient has nonzero imaginary part.
fn first_imaginary(form: &LaurentForm, nk: i32) -> Option<(i32, Complex)> {
    form.terms()
        .iter()
        .find(|(_, c)| c.im.abs() > IMAG_TOL * c.norm().max(1.0))
        .map(|&(e, c)| (e + 1 + nk, c))
}

/// Blow-up data of an end in generic normal form, or in the simple-pole
/// normal form `ω_d = (1/z + 1) dz`.
pub fn blowup_data(end: &EndDefinition) -> Result<BlowupData> {
    let d = end.dimension();
    if let Some((n_top, _)) = generic_normal_form(end) {
        let mut pole_orders = Vec::with_capacity(d - 1);
        let mut m = Vec::with_capacity(d - 1);
        let mut lead = Vec::with_capacity(d - 1);
        for form in &end.forms()[..d - 1] {
            let nk = form.pole_order();
            let hit = nk.and_then(|nk| first_imaginary(form, nk));
            pole_orders.push(nk);
            m.push(hit.map(|h| h.0));
            lead.push(hit.map(|h| h.1));
        }
        let exponent = |k: usize| Some(n_top - pole_orders[k]? + m[k]? - 1);
        let n = (0..d - 1)
            .filter_map(exponent)
            .min()
            .ok_or(Error::AllMkInfinite)?;
        let k_star: Vec<usize> = (0..d - 1).filter(|&k| exponent(k) == Some(n)).collect();
        let b: f64 = k_star.iter().map(|&k| lead[k].unwrap().im.powi(2)).sum();
        Ok(BlowupData {
            case: EndCase::Generic,
            n,
            n_top,
            pole_orders,
            m,
            k_star: k_star.iter().map(|k| k + 1).collect(),
            b,
            a: Some((n_top - 1) as f64 / b.sqrt()),
            c: None,
            c_active: false,
        })
    } else if simple_pole_normal_form(end) {
        let mut pole_orders = Vec::with_capacity(d - 1);
        let mut m = Vec::with_capacity(d - 1);
        let mut lead = Vec::with_capacity(d - 1);
        for form in &end.forms()[..d - 1] {
            let h = form.without_residue();
            let nk = h.pole_order();
            let hit = nk.and_then(|nk| first_imaginary(&h, nk));
            pole_orders.push(nk);
            m.push(hit.map(|h| h.0));
            lead.push(hit.map(|h| h.1));
        }
        let exponent = |k: usize| Some(-pole_orders[k]? + m[k]? - 1);
        let n = (0..d - 1)
            .filter_map(exponent)
            .min()
            .ok_or(Error::AllMkInfinite)?;
        let k_star: Vec<usize> = (0..d - 1).filter(|&k| exponent(k) == Some(n)).collect();
        let b: f64 = k_star.iter().map(|&k| lead[k].unwrap().im.powi(2)).sum();
        let c = lead[d - 2].map_or(0.0, |c| c.im);
        Ok(BlowupData {
            case: EndCase::SimplePoleTop,
            n,
            n_top: 1,
            pole_orders,
            m,
            c_active: k_star.contains(&(d - 2)),
            k_star: k_star.iter().map(|k| k + 1).collect(),
            b,
            a: None,
            c: Some(c),
        })
    } else {
        Err(Error::wrong_case(
            "blow-up data needs ω_d = (z^-n + ρ/z)dz with n ≥ 2 or ω_d = (1/z + 1)dz",
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn end(forms: &[&[(i32, Complex)]]) -> EndDefinition {
        let forms = forms
            .iter()
            .map(|t| LaurentForm::new(t.iter().copied()).unwrap())
            .collect();
        EndDefinition::new("t", forms).unwrap()
    }

    fn example_one() -> EndDefinition {
        end(&[
            &[(-3, c(1.0, 0.0)), (-1, c(1.0, 0.0))],
            &[(-3, c(0.0, 1.0)), (-2, c(1.0, 0.0))],
            &[(-3, c(1.0, 0.0)), (-2, c(1.0, 0.0))],
        ])
    }

    #[test]
    fn example_one_has_type_233() {
        let red = reduce(&example_one()).unwrap();
        assert_eq!(red.reduced.pole_orders(), vec![Some(2), Some(3), Some(3)]);
        assert!(red.reconstruction_error < 1e-12);
        let ty = end_type(&example_one()).unwrap();
        assert_eq!(ty.case, EndCase::IndependentTop);
    }

    #[test]
    fn reduced_end_is_fixed() {
        let red = reduce(&example_one()).unwrap();
        let again = reduce(&red.reduced).unwrap();
        assert!(again.matrix.max_abs_diff(&Matrix::identity(3)) < 1e-15);
        assert!(again.certificate.is_empty());
    }

    #[test]
    fn equal_rows_combine() {
        let e = end(&[&[(-2, c(1.0, 0.0))], &[(-2, c(1.0, 0.0))], &[(-3, c(1.0, 0.0))]]);
        let red = reduce(&e).unwrap();
        assert_eq!(red.reduced.pole_orders(), vec![None, Some(2), Some(3)]);
    }

    #[test]
    fn dependent_top_is_split_orthogonally() {
        let e = end(&[&[(-2, c(3.0, 0.0))], &[(-2, c(4.0, 0.0)), (0, c(0.0, 1.0))], &[(0, c(1.0, 0.0))]]);
        let red = reduce(&e).unwrap();
        assert!(matches!(red.certificate[0], ReductionStep::Householder { .. }));
        assert_eq!(red.reduced.pole_orders()[2], Some(2));
        assert_eq!(end_type(&e).unwrap().case, EndCase::Generic);
    }

    #[test]
    fn smooth_and_independent_cases() {
        let plane = end(&[&[(0, c(1.0, 0.0))], &[(0, c(0.0, 1.0))]]);
        let ty = end_type(&plane).unwrap();
        assert_eq!(ty.pole_orders, vec![Some(0), Some(0)]);
        assert_eq!(ty.case, EndCase::SmoothPoint);
        let case_one = end(&[&[(0, c(1.0, 0.0))], &[(-2, c(1.0, 0.0))], &[(-2, c(0.0, 1.0))]]);
        let ty = end_type(&case_one).unwrap();
        assert_eq!(ty.pole_orders, vec![Some(0), Some(2), Some(2)]);
        assert_eq!(ty.case, EndCase::IndependentTop);
    }

    #[test]
    fn validation_findings() {
        let bad = end(&[&[(0, c(1.0, 0.0))], &[(-1, c(0.0, 1.0))]]);
        let rep = validate(&bad, 64);
        assert_eq!(rep.issues, vec![ValidationIssue::ResidueNotReal { index: 2, imag: 1.0 }]);
        let horn = end(&[&[(0, c(1.0, 0.0))], &[(0, c(0.0, 1.0))], &[(-1, c(1.0, 0.0))]]);
        let rep = validate(&horn, 256);
        assert!(rep.valid, "{rep:?}");
        assert!(rep.min_wedge.unwrap() > 0.0);
        let flat = end(&[&[(0, c(1.0, 0.0))], &[(0, c(1.0, 0.0))]]);
        let rep = validate(&flat, 64);
        assert!(matches!(rep.issues[0], ValidationIssue::DegenerateAtPoint { .. }));
    }

    #[test]
    fn probe_blowup_data() {
        let e = end(&[&[(0, c(0.0, 1.0))], &[(-1, c(1.0, 0.0))], &[(-3, c(1.0, 0.0))]]);
        let data = blowup_data(&e).unwrap();
        assert_eq!(data.m, vec![Some(1), None]);
        assert_eq!(data.n, 3);
        assert_eq!(data.k_star, vec![1]);
        assert_eq!(data.b, 1.0);
        assert_eq!(data.a, Some(2.0));
    }

    #[test]
    fn diagonal_blowup_data() {
        let w = Complex::from_polar(1.0, core::f64::consts::FRAC_PI_4);
        let e = end(&[&[(0, w)], &[(-4, c(1.0, 0.0))]]);
        let data = blowup_data(&e).unwrap();
        assert_eq!(data.n, 4);
        assert!((data.b - 0.5).abs() < 1e-15);
        assert!((data.a.unwrap() - 3.0 / 0.5f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn all_real_has_no_blowup() {
        let e = end(&[&[(0, c(1.0, 0.0)), (1, c(2.0, 0.0))], &[(-1, c(1.0, 0.0))], &[(-3, c(1.0, 0.0))]]);
        assert_eq!(blowup_data(&e), Err(Error::AllMkInfinite));
    }
}
