//! Holomorphic coordinate changes `φ(z) = z·u(z)` bringing a single 1-form to
//! normal form, and the end-level pipelines built on them.
//!
//! | input                       | normal form              | `φ`                             |
//! |-----------------------------|--------------------------|---------------------------------|
//! | zero of order `n ≥ 0`       | `z^n dz`                 | `((n+1) ∫ω)^{1/(n+1)}`          |
//! | simple pole, residue `ρ`    | `ρ dz/z`                 | `z·exp(∫a)`, `ω = ρ(1/z + a)dz` |
//! | pole of order `n ≥ 2`       | `(z^{-n} + ρ/z) dz`      | `z·e^F`, `F` by recurrence      |

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::endspec::{reduce, EndDefinition};
use crate::linalg::Matrix;
use crate::series::{LaurentForm, PowerSeries, DEFAULT_ORDER};
use crate::{Complex, Error, Result};

/// Residual above which a normalization is reported as a [`Error::SolveFailure`],
/// relative to `max(1, max |c_j|)` of the input form.
pub const SOLVE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NormalizationKind {
    ZeroOrder,
    SimplePole,
    HigherPole,
}

/// Result of normalizing one form `ω`: `φ^* normal = ω` through exponent
/// `valid_through`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Normalization {
    pub kind: NormalizationKind,
    pub phi: PowerSeries,
    pub normal: LaurentForm,
    pub pole_order: i32,
    /// Residue of the input, carried unchanged into the normal form.
    pub residue: Complex,
    /// Lowest-order coefficient of the input.
    pub leading: Complex,
    /// Branch data: the root `φ'(0)` for the zero-order case, `log φ'(0)`
    /// (i.e. `F(0)`) for poles.
    pub branch: Complex,
    /// Largest coefficient of `φ^* normal - ω` up to `valid_through`.
    pub residual: f64,
    pub valid_through: i32,
}

fn check_residual(omega: &LaurentForm, residual: f64) -> Result<()> {
    let tolerance = SOLVE_TOL * omega.max_abs().max(1.0);
    if !(residual <= tolerance) {
        return Err(Error::SolveFailure {
            residual,
            tolerance,
        });
    }
    Ok(())
}

fn finish(
    kind: NormalizationKind,
    omega: &LaurentForm,
    phi: PowerSeries,
    normal: LaurentForm,
    branch: Complex,
) -> Result<Normalization> {
    let (lead_exp, leading) = omega.leading().unwrap();
    let back = normal.pullback(&phi)?;
    let valid_through = back.known_below() - 1;
    let residual = back.max_abs_diff_form(omega, Some(valid_through));
    check_residual(omega, residual)?;
    Ok(Normalization {
        kind,
        phi,
        normal,
        pole_order: -lead_exp,
        residue: omega.residue(),
        leading,
        branch,
        residual,
        valid_through,
    })
}

/// `ω = z^n a(z) dz` with `a(0) ≠ 0`, `n ≥ 0`, to `z^n dz`.
pub fn normalize_zero_order(omega: &LaurentForm, order: usize) -> Result<Normalization> {
    let (v, _) = omega
        .leading()
        .ok_or_else(|| Error::domain("cannot normalize the zero form"))?;
    if v < 0 {
        return Err(Error::domain("zero-order normalization needs a holomorphic form"));
    }
    let order = order.max(2);
    let n = v as usize;
    // ∫ω = z^{n+1} B(z), B_k = a_k/(k+n+1).
    let b = PowerSeries::from_fn(order - 1, |k| {
        omega.coeff(v + k as i32) / (k + n + 1) as f64
    });
    let root = b.scale(Complex::new((n + 1) as f64, 0.0)).nth_root(n as u32 + 1)?;
    let phi = root.shift_up(1).truncate(order);
    let branch = root.coeff(0);
    finish(
        NormalizationKind::ZeroOrder,
        omega,
        phi,
        LaurentForm::monomial(Complex::new(1.0, 0.0), v),
        branch,
    )
}

/// `ω = ρ(1/z + a(z)) dz` to `ρ dz/z`.
pub fn normalize_simple_pole(omega: &LaurentForm, order: usize) -> Result<Normalization> {
    if omega.pole_order() != Some(1) {
        return Err(Error::domain("simple-pole normalization needs pole order 1"));
    }
    let rho = omega.residue();
    if rho.is_zero() {
        return Err(Error::domain("simple-pole normalization needs a nonzero residue"));
    }
    let order = order.max(2);
    let a = PowerSeries::from_fn(order - 1, |k| omega.coeff(k as i32) / rho);
    let log_u = a.integrate().truncate(order - 1);
    let phi = log_u.exp().shift_up(1).truncate(order);
    finish(
        NormalizationKind::SimplePole,
        omega,
        phi,
        LaurentForm::monomial(rho, -1),
        Complex::zero(),
    )
}

/// `ω` with a pole of order `n ≥ 2`, leading coefficient `c` and residue `ρ`,
/// to `(z^{-n} + ρ/z) dz`.
///
/// With `φ = z e^F` the condition `φ^* normal = ω` integrates to
/// `e^{(1-n)F}/(1-n) + ρ z^{n-1} F = H̃`, `H̃_k = c_{k-n}/(k-n+1)` for
/// `k ≠ n-1`. The free constant `H̃_{n-1}` is set to `ρ F_0`, which makes `φ`
/// the linear germ `e^{F_0} z` whenever `ω` is a rescaled normal form. Writing `G = (1-n)F` and `E = e^G`, each `E_k` is fixed by lower
/// coefficients and `k E_k = Σ_{j=1}^{k} j G_j E_{k-j}` gives `G_k`. The
/// constant term takes the principal branch `G_0 = Log c`, so the leading
/// coefficient is absorbed into `φ'(0) = c^{1/(1-n)}`.
pub fn normalize_higher_pole(omega: &LaurentForm, order: usize) -> Result<Normalization> {
    let n = omega
        .pole_order()
        .filter(|&n| n >= 2)
        .ok_or_else(|| Error::domain("higher-pole normalization needs pole order >= 2"))?;
    let order = order.max(2);
    let len = order - 1;
    let rho = omega.residue();
    let c = omega.coeff(-n);
    let m = (1 - n) as f64;
    let f0 = c.ln() / m;
    let h = |k: usize| -> Complex {
        let e = k as i32 - n;
        if e == -1 {
            rho * f0
        } else {
            omega.coeff(e) / (e + 1) as f64
        }
    };
    let mut g = vec![Complex::zero(); len];
    let mut ex = vec![Complex::zero(); len];
    g[0] = c.ln();
    ex[0] = c;
    for k in 1..len {
        let shift = k as i32 - (n - 1);
        let f_prev = if shift >= 0 {
            g[shift as usize] / m
        } else {
            Complex::zero()
        };
        ex[k] = (h(k) - rho * f_prev) * m;
        let mut acc = ex[k] * k as f64;
        for j in 1..k {
            acc -= g[j] * ex[k - j] * j as f64;
        }
        g[k] = acc / (ex[0] * k as f64);
    }
    let f = PowerSeries::new(g.iter().map(|v| v / m).collect())?;
    let phi = f.exp().shift_up(1).truncate(order);
    let normal = LaurentForm::new([(-n, Complex::new(1.0, 0.0)), (-1, rho)])?;
    finish(NormalizationKind::HigherPole, omega, phi, normal, g[0] / m)
}

/// Dispatches on the pole order of `ω`.
pub fn normalize_form(omega: &LaurentForm, order: usize) -> Result<Normalization> {
    match omega.pole_order() {
        None => Err(Error::domain("cannot normalize the zero form")),
        Some(p) if p <= 0 => normalize_zero_order(omega, order),
        Some(1) => normalize_simple_pole(omega, order),
        Some(_) => normalize_higher_pole(omega, order),
    }
}

/// An end rewritten in normal form: `end = (M ∘ f) ∘ φ`, with the top form
/// exactly normal and the other forms truncated after the pullback.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormalizedEnd {
    pub end: EndDefinition,
    /// Real linear map applied to the coordinates.
    pub matrix: Matrix,
    /// Composite domain change.
    pub phi: PowerSeries,
    pub top: Normalization,
    /// Human-readable record of the steps after the reduction.
    pub steps: Vec<String>,
}

/// Drop pulled-back coefficients below this.
const PULLBACK_TOL: f64 = 1e-14;

fn scale_row(m: &mut Matrix, row: usize, s: f64) {
    m.rows[row].iter_mut().for_each(|v| *v *= s);
}

fn replace_top(end: &EndDefinition, top: LaurentForm) -> Result<EndDefinition> {
    let mut forms = end.forms().to_vec();
    let d = forms.len();
    forms[d - 1] = top;
    EndDefinition::new(end.label(), forms)
}

/// Generic case: reduce, then normalize `ω_d` to `(z^{-n_d} + ρ/z) dz`.
/// Simple-pole case: reduce, normalize `ω_d` to `dz/z` (scaling the coordinate
/// by `1/ρ`), rotate the domain so the leading coefficient of `ω_{d-1}` is real,
/// pull back by `z e^z` so that `ω_d = (1/z + 1) dz`, and when `ω_{d-1}` is
/// holomorphic and nonvanishing at 0 trade its constant term for a residue.
pub fn normalize_end(end: &EndDefinition, order: usize) -> Result<NormalizedEnd> {
    end.check_residues()?;
    let order = if order == 0 { DEFAULT_ORDER } else { order };
    let red = reduce(end)?;
    let mut matrix = red.matrix.clone();
    let d = end.dimension();
    let top_form = red.reduced.forms()[d - 1].clone();
    let nd = top_form.pole_order().unwrap_or(i32::MIN);
    if nd < 1 || red.reduced.forms()[d - 2].pole_order() == Some(nd) {
        return Err(Error::wrong_case("normal form needs a unique top pole of order >= 1"));
    }
    let mut steps = vec![String::from("reduce")];
    if nd >= 2 {
        let top = normalize_higher_pole(&top_form, order)?;
        let pulled = red.reduced.pullback(&top.phi, PULLBACK_TOL)?;
        let normalized = replace_top(&pulled, top.normal.clone())?;
        steps.push(alloc::format!("pullback by φ = z·exp(F), n_d = {nd}"));
        return Ok(NormalizedEnd {
            end: normalized,
            matrix,
            phi: top.phi.clone(),
            top,
            steps,
        });
    }

    let top = normalize_simple_pole(&top_form, order)?;
    let rho = top.residue.re;
    scale_row(&mut matrix, d - 1, 1.0 / rho);
    let mut current = red.reduced.pullback(&top.phi, PULLBACK_TOL)?;
    let mut forms = current.forms().to_vec();
    forms[d - 1] = LaurentForm::monomial(Complex::new(1.0, 0.0), -1);
    current = EndDefinition::new(end.label(), forms)?;
    let mut phi = top.phi.clone();
    steps.push(alloc::format!("pullback by φ = z·exp(∫a), scale x_d by 1/{rho}"));

    let sub = &current.forms()[d - 2];
    if let Some((e, c)) = sub.leading() {
        let theta = -c.arg() / (e + 1) as f64;
        if theta != 0.0 {
            current = current.rotate_domain(theta);
            let rot = PowerSeries::monomial(Complex::from_polar(1.0, theta), 1, order);
            phi = phi.compose(&rot)?;
            steps.push(alloc::format!("rotate domain by {theta}"));
        }
    }

    let zez = PowerSeries::identity(order).exp().shift_up(1).truncate(order);
    let mut pulled = current.pullback(&zez, PULLBACK_TOL)?;
    let mut forms = pulled.forms().to_vec();
    forms[d - 1] = LaurentForm::new([(-1, Complex::new(1.0, 0.0)), (0, Complex::new(1.0, 0.0))])?;
    pulled = EndDefinition::new(end.label(), forms)?;
    phi = phi.compose(&zez)?;
    steps.push(String::from("pullback by φ = z·e^z"));

    let sub = pulled.forms()[d - 2].clone();
    if sub.pole_order() == Some(0) {
        let a = sub.coeff(0).re;
        let weights_sub = {
            let mut w = vec![0.0; d];
            w[d - 2] = -1.0 / a;
            w[d - 1] = 1.0;
            w
        };
        let new_sub = LaurentForm::linear_combination(
            &[-1.0 / a, 1.0],
            &[sub.clone(), pulled.forms()[d - 1].clone()],
        )
        .prune(PULLBACK_TOL);
        let mut forms = pulled.forms().to_vec();
        forms[d - 2] = new_sub;
        pulled = EndDefinition::new(end.label(), forms)?;
        let old = matrix.clone();
        matrix.rows[d - 2] = (0..d)
            .map(|j| (0..d).map(|i| weights_sub[i] * old.rows[i][j]).sum())
            .collect();
        steps.push(alloc::format!("x_(d-1) <- x_d - x_(d-1)/{a}"));
    }

    Ok(NormalizedEnd {
        end: pulled,
        matrix,
        phi,
        top,
        steps,
    })
}
