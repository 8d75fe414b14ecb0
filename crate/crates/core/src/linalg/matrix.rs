//! Dense row-major matrices over `f64`.
//!
//! The type is deliberately small: just the operations the estimators and
//! character sums need, implemented directly so that results are bit-for-bit
//! deterministic across runs on the same platform.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::tol::PIVOT_FLOOR;

/// Dense matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Build from row-major data, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Shape {
                op: "Matrix::new",
                details: format!("{rows}x{cols} with {} entries", data.len()),
            });
        }
        for (idx, &x) in data.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite { row: idx / cols, col: idx % cols });
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// Build from explicit rows, validating shape and finiteness.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Shape { op: "Matrix::from_rows", details: "no rows".into() });
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape { op: "Matrix::from_rows", details: "ragged rows".into() });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Build from a function of the index pair.  Trusted: no finiteness check.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Square matrix with `d` on the diagonal.
    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Copy of the columns in `range`, in order.
    pub fn columns(&self, range: std::ops::Range<usize>) -> Matrix {
        assert!(range.end <= self.cols);
        let start = range.start;
        Matrix::from_fn(self.rows, range.len(), |i, j| self[(i, start + j)])
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> f64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(l);
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self · self^T`, exploiting symmetry of the result.
    pub fn gram_t(&self) -> Matrix {
        let mut out = Matrix::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in i..self.rows {
                let s: f64 =
                    self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum();
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }

    /// `self^T · self`, exploiting symmetry of the result.
    pub fn gram(&self) -> Matrix {
        self.transpose().gram_t()
    }

    /// Determinant via partially pivoted LU.  Returns `0.0` on exact rank
    /// collapse instead of erroring.
    pub fn det(&self) -> f64 {
        assert!(self.is_square());
        match self.lu() {
            Some((lu, _, sign)) => {
                let mut d = sign;
                for i in 0..self.rows {
                    d *= lu[(i, i)];
                }
                d
            }
            None => 0.0,
        }
    }

    /// Inverse via partially pivoted LU.
    pub fn inverse(&self) -> Result<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let (lu, perm, _) = self.lu().ok_or(Error::DegenerateMatrix {
            op: "inverse",
            details: "pivot below floor".into(),
        })?;
        let mut inv = Matrix::zeros(n, n);
        let mut x = vec![0.0; n];
        for rhs_col in 0..n {
            // Forward substitution on the permuted unit vector.
            for i in 0..n {
                let mut s = if perm[i] == rhs_col { 1.0 } else { 0.0 };
                for j in 0..i {
                    s -= lu[(i, j)] * x[j];
                }
                x[i] = s;
            }
            // Back substitution.
            for i in (0..n).rev() {
                let mut s = x[i];
                for j in i + 1..n {
                    s -= lu[(i, j)] * x[j];
                }
                x[i] = s / lu[(i, i)];
            }
            for i in 0..n {
                inv[(i, rhs_col)] = x[i];
            }
        }
        Ok(inv)
    }

    /// Packed LU with partial pivoting: returns `(LU, row permutation, sign)`
    /// or `None` if a pivot falls below the hard floor.
    fn lu(&self) -> Option<(Matrix, Vec<usize>, f64)> {
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for col in 0..n {
            let mut p = col;
            let mut best = a[(col, col)].abs();
            for r in col + 1..n {
                let v = a[(r, col)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if !(best > PIVOT_FLOOR) {
                return None;
            }
            if p != col {
                for j in 0..n {
                    let tmp = a[(col, j)];
                    a[(col, j)] = a[(p, j)];
                    a[(p, j)] = tmp;
                }
                perm.swap(col, p);
                sign = -sign;
            }
            let piv = a[(col, col)];
            for r in col + 1..n {
                let f = a[(r, col)] / piv;
                a[(r, col)] = f;
                for j in col + 1..n {
                    a[(r, j)] -= f * a[(col, j)];
                }
            }
        }
        Some((a, perm, sign))
    }

    /// Cholesky factor `L` (lower triangular, `self = L Lᵀ`) of a symmetric
    /// positive definite matrix.
    pub fn cholesky(&self) -> Result<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut l = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                if i == j {
                    if !(s > 0.0) {
                        return Err(Error::DegenerateMatrix {
                            op: "cholesky",
                            details: format!("leading minor {} not positive", i + 1),
                        });
                    }
                    l[(i, i)] = s.sqrt();
                } else {
                    l[(i, j)] = s / l[(j, j)];
                }
            }
        }
        Ok(l)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            Matrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn rejects_bad_shape() {
        assert!(matches!(Matrix::new(2, 2, vec![0.0; 3]), Err(Error::Shape { .. })));
    }

    #[test]
    fn mul_matches_by_hand() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = Matrix::from_rows(&[vec![5.0, 6.0], vec![7.0, 8.0]]).unwrap();
        let c = a.mul(&b);
        assert_eq!(c.data(), &[19.0, 22.0, 43.0, 50.0]);
    }

    #[test]
    fn det_and_inverse() {
        let a = Matrix::from_rows(&[vec![4.0, 7.0], vec![2.0, 6.0]]).unwrap();
        assert_abs_diff_eq!(a.det(), 10.0, epsilon = 1e-12);
        let inv = a.inverse().unwrap();
        let id = a.mul(&inv);
        assert_abs_diff_eq!(id[(0, 0)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(id[(0, 1)], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(id[(1, 0)], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(id[(1, 1)], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn det_of_singular_is_zero() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(a.det(), 0.0);
        assert!(a.inverse().is_err());
    }

    #[test]
    fn det_sign_tracks_permutation() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_abs_diff_eq!(a.det(), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn cholesky_recovers_gram() {
        let b = Matrix::from_rows(&[vec![2.0, 1.0], vec![0.5, 3.0], vec![1.0, 1.0]]).unwrap();
        let g = b.gram();
        let l = g.cholesky().unwrap();
        let recon = l.mul(&l.transpose());
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(recon[(i, j)], g[(i, j)], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(m.cholesky().is_err());
    }
}
