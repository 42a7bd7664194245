//! Just enough dense linear algebra for the normal equations.

use alloc::vec;
use alloc::vec::Vec;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    /// `self^T * v` for a column vector with one entry per row.
    pub(crate) fn transpose_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (row, &vr) in self.data.chunks_exact(self.cols).zip(v) {
            for (o, &j) in out.iter_mut().zip(row) {
                *o += j * vr;
            }
        }
        out
    }

    /// `self^T * self`, a `cols x cols` Gram matrix.
    pub(crate) fn gram(&self) -> Matrix {
        let n = self.cols;
        let mut out = Matrix::zeros(n, n);
        for r in 0..self.rows {
            let row = &self.data[r * n..(r + 1) * n];
            for i in 0..n {
                for j in i..n {
                    out.data[i * n + j] += row[i] * row[j];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                out.data[i * n + j] = out.data[j * n + i];
            }
        }
        out
    }
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when the matrix is singular or non-finite.
pub(crate) fn solve(a: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.rows;
    debug_assert_eq!(a.cols, n);
    debug_assert_eq!(b.len(), n);
    let mut aug = vec![0.0; n * (n + 1)];
    for r in 0..n {
        for c in 0..n {
            aug[r * (n + 1) + c] = a.at(r, c);
        }
        aug[r * (n + 1) + n] = b[r];
    }
    for i in 0..n {
        let mut pivot = i;
        let mut best = libm::fabs(aug[i * (n + 1) + i]);
        for r in (i + 1)..n {
            let v = libm::fabs(aug[r * (n + 1) + i]);
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best <= 0.0 || !best.is_finite() {
            return None;
        }
        if pivot != i {
            for c in 0..=n {
                aug.swap(i * (n + 1) + c, pivot * (n + 1) + c);
            }
        }
        let diag = aug[i * (n + 1) + i];
        for c in i..=n {
            aug[i * (n + 1) + c] /= diag;
        }
        for r in 0..n {
            if r == i {
                continue;
            }
            let factor = aug[r * (n + 1) + i];
            if factor == 0.0 {
                continue;
            }
            for c in i..=n {
                aug[r * (n + 1) + c] -= factor * aug[i * (n + 1) + c];
            }
        }
    }
    Some((0..n).map(|r| aug[r * (n + 1) + n]).collect())
}
