//! Truncated complex power series and finite Laurent 1-forms.
//!
//! A [`PowerSeries`] of truncation order `N` stores the coefficients of
//! `z^0, …, z^{N-1}`; everything from `z^N` on is unknown and never reported.
//! Binary operations work at the smaller of the two orders.
//!
//! A [`LaurentForm`] is an exact, finite expression `Σ c_j z^j dz`.
//! A [`LaurentSeries`] is a truncated Laurent expansion `z^v Σ a_k z^k`,
//! which is what pulling a form back by a holomorphic germ produces.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::{Complex, Error, Result};

/// Default working truncation order.
pub const DEFAULT_ORDER: usize = 24;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PowerSeries {
    coeffs: Vec<Complex>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("power series needs truncation order >= 1"));
        }
        Ok(Self { coeffs })
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex) -> Self {
        assert!(order >= 1, "truncation order must be >= 1");
        Self {
            coeffs: (0..order).map(f).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| Complex::zero())
    }

    pub fn constant(c: Complex, order: usize) -> Self {
        Self::from_fn(order, |k| if k == 0 { c } else { Complex::zero() })
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Complex::one(), order)
    }

    /// `c z^k` at the given order.
    pub fn monomial(c: Complex, k: usize, order: usize) -> Self {
        Self::from_fn(order, |j| if j == k { c } else { Complex::zero() })
    }

    /// The identity germ `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(Complex::one(), 1, order)
    }

    pub fn trunc_order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; zero for `k >= trunc_order` is *not* implied, callers
    /// must stay below the truncation order.
    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.max(1).min(self.coeffs.len());
        Self {
            coeffs: self.coeffs[..order].to_vec(),
        }
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Formal derivative; the truncation order drops by one (but never below 1).
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(1);
        }
        Self::from_fn(self.coeffs.len() - 1, |k| self.coeffs[k + 1] * (k as f64 + 1.0))
    }

    /// Antiderivative with zero constant term: `z^j ↦ z^{j+1}/(j+1)`.
    /// The truncation order grows by one.
    pub fn integrate(&self) -> Self {
        Self::from_fn(self.coeffs.len() + 1, |k| {
            if k == 0 {
                Complex::zero()
            } else {
                self.coeffs[k - 1] / (k as f64)
            }
        })
    }

    /// Divide by `z^k`, discarding the first `k` coefficients.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k >= self.coeffs.len() {
            return Err(Error::domain("shift exhausts the truncation order"));
        }
        Ok(Self {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Multiply by `z^k`; the truncation order grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Complex::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    fn require_unit(&self, what: &str) -> Result<Complex> {
        let a0 = self.coeffs[0];
        if a0.norm() == 0.0 || !a0.is_finite() {
            return Err(Error::Domain(alloc::format!(
                "{what} needs a nonzero constant term"
            )));
        }
        Ok(a0)
    }

    /// Multiplicative inverse; requires `a(0) != 0`.
    pub fn recip(&self) -> Result<Self> {
        let a0 = self.require_unit("reciprocal")?;
        let n = self.coeffs.len();
        let mut b = vec![Complex::zero(); n];
        b[0] = a0.inv();
        for k in 1..n {
            let mut acc = Complex::zero();
            for j in 1..=k {
                acc += self.coeffs[j] * b[k - j];
            }
            b[k] = -acc / a0;
        }
        Ok(Self { coeffs: b })
    }

    pub fn exp(&self) -> Self {
        let n = self.coeffs.len();
        let mut b = vec![Complex::zero(); n];
        b[0] = self.coeffs[0].exp();
        for k in 1..n {
            let mut acc = Complex::zero();
            for j in 1..=k {
                acc += self.coeffs[j] * b[k - j] * (j as f64);
            }
            b[k] = acc / (k as f64);
        }
        Self { coeffs: b }
    }

    /// Principal logarithm; requires `a(0) != 0`.
    pub fn ln(&self) -> Result<Self> {
        let a0 = self.require_unit("logarithm")?;
        let n = self.coeffs.len();
        let mut l = vec![Complex::zero(); n];
        l[0] = a0.ln();
        for k in 1..n {
            let mut acc = self.coeffs[k] * (k as f64);
            for (j, lj) in l.iter().enumerate().take(k).skip(1) {
                acc -= *lj * self.coeffs[k - j] * (j as f64);
            }
            l[k] = acc / (a0 * (k as f64));
        }
        Ok(Self { coeffs: l })
    }

    /// Principal `n`-th root: the constant term of the result has argument
    /// in `(-π/n, π/n]`. Requires `a(0) != 0`.
    pub fn nth_root(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("root of order zero"));
        }
        let a0 = self.require_unit("root")?;
        let root0 = Complex::from_polar(a0.norm().powf(1.0 / n as f64), a0.arg() / n as f64);
        let unit = self.scale(a0.inv());
        let mut log = unit.ln()?;
        log.coeffs[0] = Complex::zero();
        Ok(log.scale(Complex::new(1.0 / n as f64, 0.0)).exp().scale(root0))
    }

    /// Integer power; negative powers require `a(0) != 0`.
    pub fn powi(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.coeffs.len());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// `self ∘ inner`; requires `inner(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let scale = inner.max_abs().max(1.0);
        if inner.coeffs[0].norm() > 1e-14 * scale {
            return Err(Error::domain("inner series of a composition must vanish at 0"));
        }
        let order = self.coeffs.len().min(inner.coeffs.len());
        let mut inner = inner.truncate(order);
        inner.coeffs[0] = Complex::zero();
        let mut acc = Self::constant(self.coeffs[order - 1], order);
        for k in (0..order - 1).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference over the common truncation range.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Evaluate the truncated polynomial at `z`.
    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, c| acc * z + c)
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        PowerSeries::from_fn(n, |k| self.coeffs[k] + rhs.coeffs[k])
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        PowerSeries::from_fn(n, |k| self.coeffs[k] - rhs.coeffs[k])
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    /// Cauchy product truncated at the smaller order.
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        PowerSeries::from_fn(n, |k| {
            (0..=k).fold(Complex::zero(), |acc, j| {
                acc + self.coeffs[j] * rhs.coeffs[k - j]
            })
        })
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        self.scale(-Complex::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PowerSeries {
            type Output = PowerSeries;
            fn $m(self, rhs: PowerSeries) -> PowerSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A finite meromorphic 1-form `Σ c_j z^j dz` with a pole only at 0.
///
/// Terms are kept sorted by exponent and every stored coefficient is nonzero.
/// The empty form is the zero form.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LaurentForm {
    terms: Vec<(i32, Complex)>,
}

impl LaurentForm {
    /// Build from `(exponent, coefficient)` pairs. Exact zeros are dropped;
    /// repeated exponents and non-finite coefficients are rejected.
    pub fn new(terms: impl IntoIterator<Item = (i32, Complex)>) -> Result<Self> {
        let mut terms: Vec<(i32, Complex)> = terms.into_iter().collect();
        terms.sort_by_key(|t| t.0);
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidEnd(alloc::format!(
                    "exponent {} appears twice",
                    w[0].0
                )));
            }
        }
        if terms.iter().any(|t| !t.1.is_finite()) {
            return Err(Error::InvalidEnd("non-finite coefficient".into()));
        }
        terms.retain(|t| !t.1.is_zero());
        Ok(Self { terms })
    }

    /// Sorted, zero-free terms are trusted as given.
    pub(crate) fn from_sorted(terms: Vec<(i32, Complex)>) -> Self {
        let terms = terms.into_iter().filter(|t| !t.1.is_zero()).collect();
        Self { terms }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Complex, exponent: i32) -> Self {
        Self::from_sorted(vec![(exponent, c)])
    }

    pub fn terms(&self) -> &[(i32, Complex)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Negative of the lowest exponent; `None` for the zero form.
    pub fn pole_order(&self) -> Option<i32> {
        self.terms.first().map(|t| -t.0)
    }

    /// Lowest-order term `(exponent, coefficient)`.
    pub fn leading(&self) -> Option<(i32, Complex)> {
        self.terms.first().copied()
    }

    pub fn coeff(&self, exponent: i32) -> Complex {
        self.terms
            .binary_search_by_key(&exponent, |t| t.0)
            .map(|i| self.terms[i].1)
            .unwrap_or_else(|_| Complex::zero())
    }

    pub fn residue(&self) -> Complex {
        self.coeff(-1)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|t| t.1.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self::from_sorted(self.terms.iter().map(|&(e, a)| (e, a * c)).collect())
    }

    pub fn without_residue(&self) -> Self {
        Self::from_sorted(self.terms.iter().copied().filter(|t| t.0 != -1).collect())
    }

    /// Real linear combination `Σ w_i forms_i`.
    pub fn linear_combination(weights: &[f64], forms: &[LaurentForm]) -> Self {
        let mut acc: Vec<(i32, Complex)> = Vec::new();
        for (w, form) in weights.iter().zip(forms) {
            if *w == 0.0 {
                continue;
            }
            for &(e, c) in &form.terms {
                match acc.binary_search_by_key(&e, |t| t.0) {
                    Ok(i) => acc[i].1 += c * *w,
                    Err(i) => acc.insert(i, (e, c * *w)),
                }
            }
        }
        Self::from_sorted(acc)
    }

    /// Drop terms with `|c| <= tol`.
    pub fn prune(&self, tol: f64) -> Self {
        Self::from_sorted(
            self.terms
                .iter()
                .copied()
                .filter(|t| t.1.norm() > tol)
                .collect(),
        )
    }

    /// Pullback by the domain rotation `z ↦ e^{iθ} z`.
    pub fn rotate_domain(&self, theta: f64) -> Self {
        Self::from_sorted(
            self.terms
                .iter()
                .map(|&(e, c)| (e, c * Complex::from_polar(1.0, (e as f64 + 1.0) * theta)))
                .collect(),
        )
    }

    /// Pullback by the linear germ `z ↦ λ z`.
    pub fn scale_domain(&self, lambda: Complex) -> Self {
        Self::from_sorted(
            self.terms
                .iter()
                .map(|&(e, c)| (e, c * lambda.powi(e + 1)))
                .collect(),
        )
    }

    /// Expansion `z^v Σ a_k z^k` with `v` the lowest exponent and `len` known
    /// coefficients. The zero form expands at valuation 0.
    pub fn to_series(&self, len: usize) -> LaurentSeries {
        let valuation = self.terms.first().map(|t| t.0).unwrap_or(0);
        let coeffs = PowerSeries::from_fn(len.max(1), |k| self.coeff(valuation + k as i32));
        LaurentSeries { valuation, coeffs }
    }

    /// `φ^* ω`, see [`LaurentSeries::pullback`]. The form is expanded to as many
    /// coefficients as `φ` carries, so the result is known through exponent
    /// `v + N - 2` for `φ` of truncation order `N` and lowest exponent `v`;
    /// a pole of order `n` therefore leaves `N - n - 1` valid nonnegative orders.
    pub fn pullback(&self, phi: &PowerSeries) -> Result<LaurentSeries> {
        self.to_series(phi.trunc_order()).pullback(phi)
    }
}

/// Truncated Laurent expansion `z^valuation · Σ_k coeffs_k z^k` of a 1-form.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LaurentSeries {
    pub valuation: i32,
    pub coeffs: PowerSeries,
}

impl LaurentSeries {
    pub fn new(valuation: i32, coeffs: PowerSeries) -> Self {
        Self { valuation, coeffs }
    }

    /// First exponent whose coefficient is unknown.
    pub fn known_below(&self) -> i32 {
        self.valuation + self.coeffs.trunc_order() as i32
    }

    /// Coefficient of `z^e dz`, or `None` past the truncation.
    pub fn coeff(&self, exponent: i32) -> Option<Complex> {
        if exponent < self.valuation {
            Some(Complex::zero())
        } else if exponent < self.known_below() {
            Some(self.coeffs.coeff((exponent - self.valuation) as usize))
        } else {
            None
        }
    }

    pub fn residue(&self) -> Option<Complex> {
        self.coeff(-1)
    }

    /// `φ^* ω = (Σ a_k φ^{v+k}) φ' dz` for a germ `φ = z·u(z)` with `u(0) ≠ 0`.
    ///
    /// Writes `φ^{v+k} = z^{v+k} u^{v+k}` so negative powers only ever invert
    /// the unit `u`. The result keeps valuation `v` and has
    /// `min(len, N - 1)` known coefficients for `φ` of truncation order `N`.
    pub fn pullback(&self, phi: &PowerSeries) -> Result<LaurentSeries> {
        if phi.trunc_order() < 2 {
            return Err(Error::domain("pullback germ needs truncation order >= 2"));
        }
        let scale = phi.max_abs().max(1.0);
        if phi.coeff(0).norm() > 1e-14 * scale {
            return Err(Error::domain("pullback germ must fix the origin"));
        }
        if phi.coeff(1).norm() == 0.0 {
            return Err(Error::domain("pullback germ has vanishing derivative at 0"));
        }
        let unit = phi.shift_down(1)?;
        let dphi = phi.derivative();
        let outer = self.coeffs.compose(phi)?;
        let unit_pow = unit.powi(self.valuation as i64)?;
        let coeffs = &(&unit_pow * &outer) * &dphi;
        Ok(LaurentSeries {
            valuation: self.valuation,
            coeffs,
        })
    }

    /// Finite form made of the known coefficients with `|c| > tol`.
    pub fn to_form(&self, tol: f64) -> LaurentForm {
        LaurentForm::from_sorted(
            self.coeffs
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| c.norm() > tol)
                .map(|(k, &c)| (self.valuation + k as i32, c))
                .collect(),
        )
    }

    /// Largest coefficient difference to a finite form over the exponents
    /// `[min(valuations), known_below)`, optionally capped at `up_to` (inclusive).
    pub fn max_abs_diff_form(&self, form: &LaurentForm, up_to: Option<i32>) -> f64 {
        let lo = form
            .leading()
            .map(|t| t.0)
            .unwrap_or(self.valuation)
            .min(self.valuation);
        let mut hi = self.known_below() - 1;
        if let Some(cap) = up_to {
            hi = hi.min(cap);
        }
        (lo..=hi)
            .map(|e| (self.coeff(e).unwrap_or_default() - form.coeff(e)).norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn real(v: &[f64]) -> PowerSeries {
        PowerSeries::new(v.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let p = &real(&[1.0, 1.0, 0.0]) * &real(&[1.0, -1.0, 0.0]);
        assert!(p.max_abs_diff(&real(&[1.0, 0.0, -1.0])) < 1e-15);
    }

    #[test]
    fn hand_convolution() {
        let p = &real(&[1.0, 1.0, 1.0]) * &real(&[1.0, 1.0, 0.0]);
        assert!(p.max_abs_diff(&real(&[1.0, 2.0, 2.0])) < 1e-15);
        let a = real(&[0.3, -2.0, 5.0]);
        assert_eq!(&a * &PowerSeries::one(3), a);
    }

    #[test]
    fn exp_log_and_root() {
        assert_eq!(PowerSeries::zero(5).exp(), PowerSeries::one(5));
        let z = PowerSeries::identity(6);
        assert!(z.exp().ln().unwrap().max_abs_diff(&z) < 1e-15);
        let sq = real(&[1.0, 2.0, 1.0]).nth_root(2).unwrap();
        assert!(sq.max_abs_diff(&real(&[1.0, 1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn principal_branch_of_root() {
        let a = PowerSeries::constant(c(-1.0, 0.0), 4);
        let r = a.nth_root(2).unwrap();
        assert!((r.coeff(0) - c(0.0, 1.0)).norm() < 1e-15);
        let r3 = PowerSeries::constant(c(-8.0, 0.0), 2).nth_root(3).unwrap();
        let arg = r3.coeff(0).arg();
        assert!(arg > -core::f64::consts::PI / 3.0 && arg <= core::f64::consts::PI / 3.0 + 1e-15);
    }

    #[test]
    fn domain_errors() {
        let z = PowerSeries::identity(4);
        assert!(matches!(z.ln(), Err(Error::Domain(_))));
        assert!(matches!(z.recip(), Err(Error::Domain(_))));
        assert!(matches!(z.nth_root(3), Err(Error::Domain(_))));
        let one = PowerSeries::one(4);
        assert!(matches!(z.compose(&one), Err(Error::Domain(_))));
    }

    #[test]
    fn integrate_raises_order() {
        let a = real(&[1.0, 2.0, 3.0]);
        let i = a.integrate();
        assert_eq!(i.trunc_order(), 4);
        assert!(i.max_abs_diff(&real(&[0.0, 1.0, 1.0, 1.0])) < 1e-15);
    }

    #[test]
    fn laurent_form_invariants() {
        let w = LaurentForm::new([(-3, c(1.0, 0.0)), (-1, c(2.0, 0.0)), (0, c(0.0, 0.0))]).unwrap();
        assert_eq!(w.pole_order(), Some(3));
        assert_eq!(w.residue(), c(2.0, 0.0));
        assert_eq!(w.terms().len(), 2);
        let zero_order = LaurentForm::monomial(c(1.0, 0.0), 2);
        assert_eq!(zero_order.pole_order(), Some(-2));
        assert!(LaurentForm::new([(1, c(1.0, 0.0)), (1, c(2.0, 0.0))]).is_err());
        assert_eq!(LaurentForm::zero().pole_order(), None);
    }

    #[test]
    fn pullback_examples() {
        let n = 12;
        let dz = LaurentForm::monomial(c(1.0, 0.0), 0);
        let id = PowerSeries::identity(n);
        let back = dz.pullback(&id).unwrap();
        assert!(back.max_abs_diff_form(&dz, None) < 1e-15);

        // dz/z under z·e^z is (1/z + 1) dz
        let phi = &PowerSeries::identity(n).exp() * &PowerSeries::one(n);
        let phi = phi.shift_up(1).truncate(n);
        let back = LaurentForm::monomial(c(1.0, 0.0), -1).pullback(&phi).unwrap();
        let expect = LaurentForm::new([(-1, c(1.0, 0.0)), (0, c(1.0, 0.0))]).unwrap();
        assert!(back.max_abs_diff_form(&expect, None) < 1e-14);

        // z dz under 2z is 4z dz
        let two_z = PowerSeries::monomial(c(2.0, 0.0), 1, n);
        let back = LaurentForm::monomial(c(1.0, 0.0), 1).pullback(&two_z).unwrap();
        let expect = LaurentForm::monomial(c(4.0, 0.0), 1);
        assert!(back.max_abs_diff_form(&expect, None) < 1e-14);
    }

    #[test]
    fn pullback_rejects_critical_germ() {
        let z2 = PowerSeries::monomial(c(1.0, 0.0), 2, 6);
        let dz = LaurentForm::monomial(c(1.0, 0.0), 0);
        assert!(matches!(dz.pullback(&z2), Err(Error::Domain(_))));
    }
}
