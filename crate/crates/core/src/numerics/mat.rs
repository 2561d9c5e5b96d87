//! Small dense row-major matrices.
//!
//! Everything in the bench is at most 4×4, so storage is a plain `Vec<f64>`
//! and products are naive triple loops.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use crate::error::{invalid, Error, Result};

/// Largest dimension a [`Mat`] may have.
pub const MAX_DIM: usize = 4;

/// Pivots with magnitude below this are treated as singular.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

/// Dense real matrix of at most [`MAX_DIM`]×[`MAX_DIM`] entries.
#[derive(Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    /// Builds a matrix from row-major entries. All entries must be finite.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid("matrix must have at least one row and column"));
        }
        if rows > MAX_DIM || cols > MAX_DIM {
            return Err(invalid(format!(
                "matrix {rows}x{cols} exceeds the {MAX_DIM}x{MAX_DIM} cap"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(invalid("matrix entries must be finite"));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally sized rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        Self::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1 && rows <= MAX_DIM && cols <= MAX_DIM);
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        let mut data = vec![0.0; n * n];
        for (i, v) in entries.iter().enumerate() {
            data[i * n + i] = *v;
        }
        Self::new(n, n, data)
    }

    /// 1×1 matrix holding `v`.
    pub fn scalar(v: f64) -> Result<Self> {
        Self::new(1, 1, vec![v])
    }

    /// Column vector.
    pub fn column(entries: &[f64]) -> Result<Self> {
        Self::new(entries.len(), 1, entries.to_vec())
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

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self[(i, j)]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Mat) -> Result<Mat> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                out[(i, j)] = (0..self.cols).map(|k| self[(i, k)] * rhs[(k, j)]).sum();
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// Induced ∞-norm (largest absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `(self + selfᵀ)/2`.
    pub fn symmetrize(&self) -> Mat {
        debug_assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = 0.5 * (self[(i, j)] + self[(j, i)]);
            }
        }
        out
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    /// Solves `self · X = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &Mat) -> Result<Mat> {
        if !self.is_square() || rhs.rows != self.rows {
            return Err(Error::Dimension(format!(
                "cannot solve {}x{} system with {}x{} right-hand side",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut a = self.data.clone();
        let mut b = rhs.data.clone();
        gauss_solve(&mut a, &mut b, self.rows, rhs.cols)?;
        Mat::new(rhs.rows, rhs.cols, b)
    }

    pub fn inverse(&self) -> Result<Mat> {
        self.solve(&Mat::identity(self.rows))
    }
}

/// Solves `A X = B` in place for an `n`×`n` row-major `a` and `n`×`nrhs`
/// row-major `b`; the solution overwrites `b`.
///
/// Used directly for the vectorized Lyapunov systems, which exceed the
/// [`Mat`] size cap.
pub(crate) fn gauss_solve(a: &mut [f64], b: &mut [f64], n: usize, nrhs: usize) -> Result<()> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n * nrhs);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .expect("non-empty pivot range");
        let pivot = a[pivot_row * n + col];
        if !(pivot.abs() >= PIVOT_THRESHOLD) {
            return Err(Error::Singular { pivot: pivot.abs() });
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            for k in 0..nrhs {
                b.swap(col * nrhs + k, pivot_row * nrhs + k);
            }
        }
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            a[row * n + col] = 0.0;
            for k in col + 1..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            for k in 0..nrhs {
                b[row * nrhs + k] -= factor * b[col * nrhs + k];
            }
        }
    }
    for col in (0..n).rev() {
        let pivot = a[col * n + col];
        for k in 0..nrhs {
            let tail: f64 = (col + 1..n).map(|j| a[col * n + j] * b[j * nrhs + k]).sum();
            b[col * nrhs + k] = (b[col * nrhs + k] - tail) / pivot;
        }
    }
    Ok(())
}

/// Free-function form of [`Mat::mul`].
pub fn mat_mul(a: &Mat, b: &Mat) -> Result<Mat> {
    a.mul(b)
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

fn zip_with(a: &Mat, b: &Mat, f: impl Fn(f64, f64) -> f64) -> Mat {
    assert!(
        a.rows == b.rows && a.cols == b.cols,
        "shape mismatch {}x{} vs {}x{}",
        a.rows,
        a.cols,
        b.rows,
        b.cols
    );
    Mat {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| f(*x, *y)).collect(),
    }
}

impl Add for &Mat {
    type Output = Mat;

    fn add(self, rhs: &Mat) -> Mat {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &Mat {
    type Output = Mat;

    fn sub(self, rhs: &Mat) -> Mat {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Neg for &Mat {
    type Output = Mat;

    fn neg(self) -> Mat {
        self.scale(-1.0)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_neutral() {
        let m = Mat::from_rows(&[[1.5, -2.0], [0.25, 7.0]]).unwrap();
        assert_eq!(Mat::identity(2).mul(&m).unwrap(), m);
        assert_eq!(m.mul(&Mat::identity(2)).unwrap(), m);
    }

    #[test]
    fn nilpotent_times_column() {
        let a = Mat::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        let b = Mat::column(&[0.0, 1.0]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), Mat::column(&[1.0, 0.0]).unwrap());
    }

    #[test]
    fn hand_product() {
        let a = Mat::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let b = Mat::from_rows(&[[5.0, 6.0], [7.0, 8.0]]).unwrap();
        let expected = Mat::from_rows(&[[19.0, 22.0], [43.0, 50.0]]).unwrap();
        assert_eq!(mat_mul(&a, &b).unwrap(), expected);
    }

    #[test]
    fn mismatched_product_is_rejected() {
        let a = Mat::zeros(2, 3);
        let b = Mat::zeros(2, 2);
        assert!(matches!(a.mul(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn constructor_validation() {
        assert!(Mat::new(2, 2, vec![1.0; 3]).is_err());
        assert!(Mat::new(0, 2, vec![]).is_err());
        assert!(Mat::new(5, 1, vec![0.0; 5]).is_err());
        assert!(Mat::new(1, 1, vec![f64::NAN]).is_err());
    }

    #[test]
    fn solve_needs_pivoting() {
        // zero in the leading position forces a row swap
        let a = Mat::from_rows(&[[0.0, 2.0], [3.0, 1.0]]).unwrap();
        let b = Mat::column(&[4.0, 5.0]).unwrap();
        let x = a.solve(&b).unwrap();
        assert!((x[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((x[(1, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn singular_solve_is_reported() {
        let a = Mat::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(matches!(a.inverse(), Err(Error::Singular { .. })));
    }

    #[test]
    fn norms() {
        let m = Mat::from_rows(&[[1.0, -2.0], [-3.0, 0.5]]).unwrap();
        assert_eq!(m.norm_inf(), 3.5);
        assert_eq!(m.max_abs(), 3.0);
    }
}
