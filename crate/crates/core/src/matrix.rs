//! Dense row-major real matrices: the carrier for multipliers, test
//! operators, discretized kernels and tensors.

use crate::{Error, Result};

/// Dense real matrix with finite entries, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Matrix> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!(
                "dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!("non-finite entry {bad}")));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Rank-one matrix `u vᵀ`.
    pub fn outer(u: &[f64], v: &[f64]) -> Matrix {
        Matrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// `A x` for `x` of length `cols`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            out[i] = acc;
        }
        out
    }

    /// `Aᵀ y` for `y` of length `rows`.
    pub fn tr_matvec(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let row = self.row(i);
            let yi = y[i];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * yi;
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Matrix, factor: f64) -> Matrix {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + factor * b)
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Index of the entry with maximal modulus (row, col), lowest index wins.
    pub fn argmax_abs(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut val = -1.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j).abs();
                if a > val {
                    val = a;
                    best = (i, j);
                }
            }
        }
        best
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Numerical rank from the Jacobi SVD singular values.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let sv = crate::linalg::singular_values(self);
        let top = sv.first().copied().unwrap_or(0.0);
        sv.iter().filter(|&&s| s > rel_tol * top).count()
    }
}

/// Entrywise (Schur/Hadamard) product: the action of the multiplier `m` on a
/// finite matrix.
pub fn hadamard(m: &Matrix, a: &Matrix) -> Result<Matrix> {
    if m.rows() != a.rows() || m.cols() != a.cols() {
        return Err(Error::ShapeMismatch {
            left_rows: m.rows(),
            left_cols: m.cols(),
            right_rows: a.rows(),
            right_cols: a.cols(),
        });
    }
    Ok(Matrix {
        rows: m.rows,
        cols: m.cols,
        data: m.data.iter().zip(&a.data).map(|(x, y)| x * y).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_basic() {
        let m = Matrix::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let a = Matrix::new(2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let h = hadamard(&m, &a).unwrap();
        assert_eq!(h.data(), &[0.0, 2.0, 3.0, 0.0]);
    }

    #[test]
    fn hadamard_identity_and_zero() {
        let a = Matrix::new(2, 3, vec![1.0, -2.0, 3.0, 4.0, 5.0, -6.0]).unwrap();
        let ones = Matrix::from_fn(2, 3, |_, _| 1.0);
        assert_eq!(hadamard(&ones, &a).unwrap(), a);
        let zero = Matrix::zeros(2, 3);
        assert_eq!(hadamard(&zero, &a).unwrap(), zero);
    }

    #[test]
    fn hadamard_shape_mismatch() {
        let a = Matrix::zeros(2, 2);
        let b = Matrix::zeros(2, 3);
        assert!(matches!(
            hadamard(&a, &b),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn rejects_invalid() {
        assert!(Matrix::new(0, 2, vec![]).is_err());
        assert!(Matrix::new(1, 2, vec![1.0]).is_err());
        assert!(Matrix::new(1, 2, vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn matvec_and_transpose() {
        let a = Matrix::new(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(a.matvec(&[1.0, 0.0, -1.0]), vec![-2.0, -2.0]);
        assert_eq!(a.tr_matvec(&[1.0, 1.0]), vec![5.0, 7.0, 9.0]);
        assert_eq!(a.transpose().get(2, 1), 6.0);
    }
}
