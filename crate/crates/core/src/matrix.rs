//! Dense row-major payoff matrices and probability vectors.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major matrix of finite reals.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// On-disk layout: `{ "rows": n, "cols": m, "data": [[...], ...] }`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<Vec<f64>>,
}

impl TryFrom<MatrixRepr> for Matrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.data.len() != r.rows {
            return Err(Error::dim("matrix rows", r.rows, r.data.len()));
        }
        if let Some(bad) = r.data.iter().find(|row| row.len() != r.cols) {
            return Err(Error::dim("matrix cols", r.cols, bad.len()));
        }
        Matrix::from_rows(r.data)
    }
}

impl From<Matrix> for MatrixRepr {
    fn from(m: Matrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            data: m.to_rows(),
        }
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Invalid("matrix must have at least one row and one column".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::dim("matrix data", rows * cols, data.len()));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!(
                "non-finite entry at ({}, {})",
                pos / cols + 1,
                pos % cols + 1
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: impl IntoIterator<Item = R>) -> Result<Self> {
        let mut data = Vec::new();
        let mut n = 0;
        let mut m = None;
        for row in rows {
            let row = row.as_ref();
            match m {
                None => m = Some(row.len()),
                Some(c) if c != row.len() => return Err(Error::dim("matrix row length", c, row.len())),
                _ => {}
            }
            data.extend_from_slice(row);
            n += 1;
        }
        Matrix::new(n, m.unwrap_or(0), data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    /// `xᵀ·M`, a vector of length `cols`. Summation runs over rows in index order.
    pub fn left_mul(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += xi * a;
            }
        }
        out
    }

    /// `M·y`, a vector of length `rows`.
    pub fn right_mul(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(y).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Tolerance on the weight sum accepted before renormalization.
const SUM_SLACK: f64 = 1e-6;

/// A probability distribution over a finite action set.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SimplexVector(Vec<f64>);

impl SimplexVector {
    /// Validates and renormalizes `weights`. Tiny negative entries (LP noise
    /// below `1e-9`) are clamped to zero.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Invalid("simplex vector must be non-empty".into()));
        }
        let mut w = weights;
        for v in w.iter_mut() {
            if !v.is_finite() || *v < -1e-9 {
                return Err(Error::Invalid(format!("invalid probability weight {v}")));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > SUM_SLACK {
            return Err(Error::Invalid(format!("weights sum to {sum}, expected 1")));
        }
        w.iter_mut().for_each(|v| *v /= sum);
        Ok(SimplexVector(w))
    }

    /// Accepts any non-negative weights with positive sum and rescales them.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) || weights.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Invalid("weights must be non-negative with positive sum".into()));
        }
        Ok(SimplexVector(weights.into_iter().map(|v| v / sum).collect()))
    }

    pub fn uniform(dim: usize) -> Self {
        assert!(dim > 0);
        SimplexVector(vec![1.0 / dim as f64; dim])
    }

    pub fn pure(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut w = vec![0.0; dim];
        w[index] = 1.0;
        SimplexVector(w)
    }

    /// Wraps weights already known to lie on the simplex (internal use).
    pub(crate) fn from_raw(weights: Vec<f64>) -> Self {
        SimplexVector(weights)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Indices with weight above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > tol).collect()
    }
}

impl<'de> Deserialize<'de> for SimplexVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Vec::<f64>::deserialize(d)?;
        SimplexVector::new(w).map_err(serde::de::Error::custom)
    }
}

impl AsRef<[f64]> for SimplexVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}
