//! Small dense square matrices: determinants, leading minors and principal submatrices.
//!
//! Everything here works on matrices of size at most a handful (bordered Hessians of
//! three-variable functions, 3x3 covariance blocks), so plain LU with partial pivoting
//! is accurate enough and keeps the crate free of a linear-algebra dependency.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::math;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows are not square.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix rows must form a square");
            data.extend_from_slice(row);
        }
        Self { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `(M + M^T) / 2`.
    pub fn symmetrized(&self) -> Self {
        let mut s = self.clone();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let avg = 0.5 * (self[(i, j)] + self[(j, i)]);
                s[(i, j)] = avg;
                s[(j, i)] = avg;
            }
        }
        s
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    /// `a * self + b * other`.
    pub fn mix(&self, a: f64, other: &Matrix, b: f64) -> Self {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self { n: self.n, data }
    }

    /// Top-left `k x k` block.
    pub fn leading_minor(&self, k: usize) -> Self {
        let idx: Vec<usize> = (0..k).collect();
        self.principal_submatrix(&idx)
    }

    /// Submatrix keeping the listed rows and the same columns.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let k = idx.len();
        let mut m = Self::zeros(k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m[(a, b)] = self[(i, j)];
            }
        }
        m
    }

    /// Determinant by LU decomposition with partial pivoting. The empty matrix has determinant 1.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut pivot = col;
            let mut best = a[col * n + col].abs();
            for row in (col + 1)..n {
                let v = a[row * n + col].abs();
                if v > best {
                    best = v;
                    pivot = row;
                }
            }
            if best == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for row in (col + 1)..n {
                let factor = a[row * n + col] / p;
                if factor != 0.0 {
                    for j in col..n {
                        a[row * n + j] -= factor * a[col * n + j];
                    }
                }
            }
        }
        det
    }

    /// Natural log of the determinant of a symmetric positive-definite matrix via Cholesky.
    /// Returns `None` when the matrix is not numerically positive definite.
    pub fn cholesky_logdet(&self) -> Option<f64> {
        let n = self.n;
        let mut l = vec![0.0; n * n];
        let mut logdet = 0.0;
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self[(i, j)];
                for k in 0..j {
                    sum -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if sum <= 0.0 || !sum.is_finite() {
                        return None;
                    }
                    let d = math::sqrt(sum);
                    l[i * n + i] = d;
                    logdet += 2.0 * math::ln(d);
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        Some(logdet)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_known_matrices() {
        assert_eq!(Matrix::zeros(0).det(), 1.0);
        assert_eq!(Matrix::identity(4).det(), 1.0);
        let m = Matrix::from_rows(&[&[0.0, 2.0, 1.0], &[2.0, 0.0, 1.0], &[1.0, 1.0, 0.0]]);
        assert!((m.det() - 4.0).abs() < 1e-14);
        let swap = Matrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(swap.det(), -1.0);
    }

    #[test]
    fn leading_minor_and_submatrix() {
        let m = Matrix::from_rows(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], &[7.0, 8.0, 10.0]]);
        assert_eq!(
            m.leading_minor(2),
            Matrix::from_rows(&[&[1.0, 2.0], &[4.0, 5.0]])
        );
        assert_eq!(
            m.principal_submatrix(&[0, 2]),
            Matrix::from_rows(&[&[1.0, 3.0], &[7.0, 10.0]])
        );
        assert!((m.det() - (-3.0)).abs() < 1e-12);
    }

    #[test]
    fn cholesky_logdet_matches_lu() {
        let m = Matrix::from_rows(&[&[4.0, 1.0, 0.5], &[1.0, 3.0, 0.2], &[0.5, 0.2, 2.0]]);
        let via_lu = math::ln(m.det());
        assert!((m.cholesky_logdet().unwrap() - via_lu).abs() < 1e-12);
        let indefinite = Matrix::from_rows(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(indefinite.cholesky_logdet().is_none());
    }
}
