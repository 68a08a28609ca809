//! Small dense linear algebra: LU with partial pivoting, mixed-precision
//! iterative refinement, Cholesky and triangular inversion.
//!
//! Matrices here are at most a few dozen rows, so everything is a flat
//! row-major `Vec<f64>` without blocking.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use thiserror::Error;

use crate::dd::Dd;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is singular at pivot column {0}")]
    Singular(usize),
    #[error("matrix is not positive definite: pivot {index} is {value:e}")]
    NotPositiveDefinite { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// Dense row-major square-or-rectangular matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `selfᵀ v`.
    pub fn tr_matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0.0; self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs()))
    }

    pub fn symmetrized(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization `PA = LU` with partial pivoting, stored compactly.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &Matrix) -> Result<Self, LinalgError> {
        let n = a.rows;
        if a.cols != n {
            return Err(LinalgError::Dimension { expected: n, got: a.cols });
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].abs()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == 0.0 || !pmax.is_finite() {
                return Err(LinalgError::Singular(k));
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                if m != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= m * lu[(k, j)];
                    }
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        x
    }
}

/// Solve `A x = b` given in double-double, returning the double-double
/// solution and the final relative residual `‖b − Ax‖∞ / ‖b‖∞`.
///
/// The factorization is done once in f64 on the rounded matrix; each
/// refinement step computes the residual exactly enough in double-double
/// and corrects the accumulated solution. Converges while
/// `cond(A) · 2⁻⁵³ < 1`.
pub fn solve_refined_dd(a: &[Dd], n: usize, b: &[Dd], max_steps: usize) -> Result<(Vec<Dd>, f64), LinalgError> {
    if a.len() != n * n {
        return Err(LinalgError::Dimension { expected: n * n, got: a.len() });
    }
    if b.len() != n {
        return Err(LinalgError::Dimension { expected: n, got: b.len() });
    }
    let rounded = Matrix::from_fn(n, n, |i, j| a[i * n + j].to_f64());
    let lu = Lu::new(&rounded)?;
    let bnorm = b.iter().fold(0.0, |m, v| f64::max(m, v.to_f64().abs())).max(f64::MIN_POSITIVE);

    let mut x = vec![Dd::ZERO; n];
    let mut rel = f64::INFINITY;
    for _ in 0..max_steps.max(1) {
        let r: Vec<Dd> = (0..n)
            .map(|i| {
                let mut acc = b[i];
                for j in 0..n {
                    acc = acc - a[i * n + j] * x[j];
                }
                acc
            })
            .collect();
        let rf: Vec<f64> = r.iter().map(|v| v.to_f64()).collect();
        rel = rf.iter().fold(0.0, |m, v| f64::max(m, v.abs())) / bnorm;
        if rel < 1e-30 {
            break;
        }
        let dx = lu.solve(&rf);
        for (xi, d) in x.iter_mut().zip(dx) {
            *xi = *xi + Dd::from_f64(d);
        }
    }
    Ok((x, rel))
}

/// Lower Cholesky factor `L` with `A = L Lᵀ`.
pub fn cholesky(a: &Matrix) -> Result<Matrix, LinalgError> {
    let n = a.rows;
    if a.cols != n {
        return Err(LinalgError::Dimension { expected: n, got: a.cols });
    }
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(LinalgError::NotPositiveDefinite { index: j, value: d });
        }
        let djj = libm::sqrt(d);
        l[(j, j)] = djj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Inverse of a lower-triangular matrix by forward substitution.
pub fn lower_triangular_inverse(l: &Matrix) -> Result<Matrix, LinalgError> {
    let n = l.rows;
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        if l[(i, i)] == 0.0 {
            return Err(LinalgError::Singular(i));
        }
        inv[(i, i)] = 1.0 / l[(i, i)];
        for j in 0..i {
            let s: f64 = (j..i).map(|k| l[(i, k)] * inv[(k, j)]).sum();
            inv[(i, j)] = -s / l[(i, i)];
        }
    }
    Ok(inv)
}
