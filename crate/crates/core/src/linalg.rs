//! Minimal dense linear algebra for the model-fitting code.
//!
//! The systems solved here are tiny (one row and column per model
//! coefficient), so a plain partial-pivot Gaussian elimination is all that is
//! needed.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Real> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    /// Builds a matrix from row slices. All rows must share one width.
    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(height * width);
        for row in rows {
            if row.len() != width {
                return Err(Error::invalid(format!(
                    "ragged matrix rows: expected width {width}, found {}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: height,
            cols: width,
            data,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> F {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: F) {
        self.data[r * self.cols + c] = value;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Solves `self * x = rhs` for square `self`. `None` when singular.
    pub fn solve(&self, rhs: &[F]) -> Option<Vec<F>> {
        let n = self.rows;
        if self.cols != n || rhs.len() != n {
            return None;
        }
        let mut a = self.data.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_abs = a[col * n + col].abs();
            for r in col + 1..n {
                let candidate = a[r * n + col].abs();
                if candidate > pivot_abs {
                    pivot_abs = candidate;
                    pivot_row = r;
                }
            }
            if !(pivot_abs > F::zero()) || !pivot_abs.is_finite() {
                return None;
            }
            if pivot_row != col {
                for c in 0..n {
                    a.swap(pivot_row * n + c, col * n + c);
                }
                b.swap(pivot_row, col);
            }
            let pivot = a[col * n + col];
            for r in col + 1..n {
                let factor = a[r * n + col] / pivot;
                if factor == F::zero() {
                    continue;
                }
                for c in col..n {
                    let delta = factor * a[col * n + c];
                    a[r * n + c] = a[r * n + c] - delta;
                }
                b[r] = b[r] - factor * b[col];
            }
        }
        let mut x = vec![F::zero(); n];
        for col in (0..n).rev() {
            let mut acc = b[col];
            for c in col + 1..n {
                acc = acc - a[col * n + c] * x[c];
            }
            x[col] = acc / a[col * n + col];
            if !x[col].is_finite() {
                return None;
            }
        }
        Some(x)
    }

    /// Inverse via column-wise solves. `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        let n = self.rows;
        if self.cols != n {
            return None;
        }
        let mut out = Matrix::zeros(n, n);
        let mut unit = vec![F::zero(); n];
        for col in 0..n {
            unit[col] = F::one();
            let x = self.solve(&unit)?;
            unit[col] = F::zero();
            for (r, value) in x.into_iter().enumerate() {
                out.set(r, col, value);
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solves_a_small_system() {
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x = m.solve(&[3.0, 5.0]).unwrap();
        assert_relative_eq!(x[0], 0.8, epsilon = 1e-12);
        assert_relative_eq!(x[1], 1.4, epsilon = 1e-12);
    }

    #[test]
    fn singular_system_is_detected() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(m.solve(&[1.0, 2.0]).is_none());
    }

    #[test]
    fn inverse_round_trips() {
        let m = Matrix::from_rows(&[vec![4.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 2.0]])
            .unwrap();
        let inv = m.inverse().unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let mut acc = 0.0;
                for k in 0..3 {
                    acc += m.get(r, k) * inv.get(k, c);
                }
                let expected = if r == c { 1.0 } else { 0.0 };
                assert_relative_eq!(acc, expected, epsilon = 1e-12);
            }
        }
    }
}
