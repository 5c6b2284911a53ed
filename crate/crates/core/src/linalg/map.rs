use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;

/// An endomorphism of `R^m`, stored as its matrix in the standard basis.
///
/// Column `c` holds the image of `e_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap(DMatrix<f64>);

impl LinearMap {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        Ok(Self(matrix))
    }

    /// Builds a map from row-major nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        Ok(Self(DMatrix::from_fn(n, n, |r, c| rows[r][c])))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        check_dim(self.dim(), v.len())?;
        Ok(&self.0 * v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 * &other.0))
    }

    pub fn scale(&self, factor: f64) -> LinearMap {
        Self(&self.0 * factor)
    }

    pub fn square(&self) -> LinearMap {
        Self(&self.0 * &self.0)
    }

    pub fn transpose(&self) -> LinearMap {
        Self(self.0.transpose())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    /// Largest absolute entrywise difference together with its position.
    pub fn max_abs_diff(&self, other: &LinearMap) -> (f64, usize, usize) {
        let mut best = (0.0, 0, 0);
        for c in 0..self.dim() {
            for r in 0..self.dim() {
                let d = (self.0[(r, c)] - other.0[(r, c)]).abs();
                if d > best.0 {
                    best = (d, r, c);
                }
            }
        }
        best
    }

    pub fn column(&self, c: usize) -> Vector {
        self.0.column(c).into_owned()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| self.0[(r, c)]).collect())
            .collect()
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

impl Add for &LinearMap {
    type Output = LinearMap;
    fn add(self, rhs: &LinearMap) -> LinearMap {
        LinearMap(&self.0 + &rhs.0)
    }
}

impl Sub for &LinearMap {
    type Output = LinearMap;
    fn sub(self, rhs: &LinearMap) -> LinearMap {
        LinearMap(&self.0 - &rhs.0)
    }
}

impl Mul for &LinearMap {
    type Output = LinearMap;
    fn mul(self, rhs: &LinearMap) -> LinearMap {
        LinearMap(&self.0 * &rhs.0)
    }
}

impl Neg for &LinearMap {
    type Output = LinearMap;
    fn neg(self) -> LinearMap {
        LinearMap(-&self.0)
    }
}

impl From<LinearMap> for DMatrix<f64> {
    fn from(map: LinearMap) -> Self {
        map.0
    }
}
