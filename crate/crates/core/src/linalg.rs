//! Small dense real linear algebra on `ℝ^d` vectors and `d × d` matrices.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Plücker coordinates `x_i y_j - x_j y_i` for `i < j`.
pub fn plucker(x: &[f64], y: &[f64]) -> Vec<f64> {
    let d = x.len();
    let mut out = Vec::with_capacity(d * (d - 1) / 2);
    for i in 0..d {
        for j in i + 1..d {
            out.push(x[i] * y[j] - x[j] * y[i]);
        }
    }
    out
}

/// `|X ∧ Y|`, computed from the 2×2 minors. Algebraically equal to
/// `sqrt(|X|²|Y|² - ⟨X,Y⟩²)` but free of the cancellation that form suffers
/// when `X` and `Y` are nearly parallel.
pub fn wedge_norm(x: &[f64], y: &[f64]) -> f64 {
    norm(&plucker(x, y))
}

/// `⟨X ∧ Y, U ∧ V⟩ = ⟨X,U⟩⟨Y,V⟩ - ⟨X,V⟩⟨Y,U⟩`, evaluated on minors.
pub fn wedge_dot(x: &[f64], y: &[f64], u: &[f64], v: &[f64]) -> f64 {
    dot(&plucker(x, y), &plucker(u, v))
}

/// Square real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Matrix {
    pub rows: Vec<Vec<f64>>,
}

impl Matrix {
    pub fn identity(d: usize) -> Self {
        let rows = (0..d)
            .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self { rows }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        Self { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        let d = self.dim();
        let mut out = vec![vec![0.0; d]; d];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..d).map(|k| self.rows[i][k] * rhs.rows[k][j]).sum();
            }
        }
        Matrix { rows: out }
    }

    pub fn transpose(&self) -> Matrix {
        let d = self.dim();
        Matrix {
            rows: (0..d).map(|i| (0..d).map(|j| self.rows[j][i]).collect()).collect(),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|row| dot(row, x)).collect()
    }

    /// Max-entry distance to another matrix.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.rows
            .iter()
            .flatten()
            .zip(other.rows.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Determinant by partial-pivot elimination.
    pub fn determinant(&self) -> f64 {
        let d = self.dim();
        let mut a = self.rows.clone();
        let mut det = 1.0;
        for col in 0..d {
            let pivot = (col..d)
                .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
                .unwrap();
            if a[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            let (top, rest) = a.split_at_mut(col + 1);
            let pivot_row = &top[col];
            for row in rest.iter_mut().take(d - col - 1) {
                let f = row[col] / pivot_row[col];
                for (x, p) in row[col..d].iter_mut().zip(&pivot_row[col..d]) {
                    *x -= f * p;
                }
            }
        }
        det
    }

    /// Householder reflection sending `s` to `|s| e_target`; identity when `s`
    /// already points that way.
    pub fn householder_onto_axis(s: &[f64], target: usize) -> Matrix {
        let d = s.len();
        let len = norm(s);
        let mut v = s.to_vec();
        v[target] -= len;
        let vv = dot(&v, &v);
        if vv <= (1e-30 * len * len).max(f64::MIN_POSITIVE) {
            return Matrix::identity(d);
        }
        let mut m = Matrix::identity(d);
        for i in 0..d {
            for j in 0..d {
                m.rows[i][j] -= 2.0 * v[i] * v[j] / vv;
            }
        }
        m
    }

    /// Permutation matrix whose row `i` selects coordinate `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Matrix {
        let d = perm.len();
        let mut m = Matrix {
            rows: vec![vec![0.0; d]; d],
        };
        for (i, &p) in perm.iter().enumerate() {
            m.rows[i][p] = 1.0;
        }
        m
    }
}

/// Gram–Schmidt on two vectors; `None` when they are (numerically) dependent.
pub fn orthonormal_pair(x: &[f64], y: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let nx = norm(x);
    if nx == 0.0 || !nx.is_finite() {
        return None;
    }
    let e1: Vec<f64> = x.iter().map(|v| v / nx).collect();
    let p = dot(y, &e1);
    let mut e2: Vec<f64> = y.iter().zip(&e1).map(|(a, b)| a - p * b).collect();
    let n2 = norm(&e2);
    if n2 <= 1e-14 * norm(y) || n2 == 0.0 {
        return None;
    }
    e2.iter_mut().for_each(|v| *v /= n2);
    Some((e1, e2))
}
