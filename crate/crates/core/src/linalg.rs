//! Symmetric matrices in dimension 1 or 2.
//!
//! Everything in this crate lives on the line or in the plane, so covariance
//! handling stays closed-form: determinant, inverse, eigenvalues and Cholesky
//! factors of a symmetric 2x2 need no external solver.

use crate::error::{Error, Result};

/// Symmetric matrix of dimension 1 or 2. For dimension 1 only `m[0][0]` is used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    m: [[f64; 2]; 2],
}

impl SymMatrix {
    pub fn dim1(v: f64) -> Self {
        SymMatrix { dim: 1, m: [[v, 0.0], [0.0, 0.0]] }
    }

    pub fn dim2(xx: f64, xy: f64, yy: f64) -> Self {
        SymMatrix { dim: 2, m: [[xx, xy], [xy, yy]] }
    }

    /// Validate and adopt a row-major 2x2 array as a symmetric matrix.
    pub fn from_2x2(m: [[f64; 2]; 2]) -> Result<Self> {
        let scale = m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
        if (m[0][1] - m[1][0]).abs() > 1e-12 * scale {
            return Err(Error::InvalidParameter("matrix is not symmetric".into()));
        }
        Ok(SymMatrix::dim2(m[0][0], 0.5 * (m[0][1] + m[1][0]), m[1][1]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn det(&self) -> f64 {
        match self.dim {
            1 => self.m[0][0],
            _ => self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[0][1],
        }
    }

    /// Eigenvalues, descending. Closed form for symmetric 2x2.
    pub fn eigenvalues(&self) -> (f64, f64) {
        match self.dim {
            1 => (self.m[0][0], self.m[0][0]),
            _ => {
                let tr = self.m[0][0] + self.m[1][1];
                let gap = ((self.m[0][0] - self.m[1][1]).powi(2)
                    + 4.0 * self.m[0][1] * self.m[0][1])
                    .sqrt();
                (0.5 * (tr + gap), 0.5 * (tr - gap))
            }
        }
    }

    /// Ratio of extreme absolute eigenvalues; infinite when singular.
    pub fn condition_number(&self) -> f64 {
        let (a, b) = self.eigenvalues();
        let (hi, lo) = (a.abs().max(b.abs()), a.abs().min(b.abs()));
        if lo == 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    pub fn is_positive_definite(&self) -> bool {
        match self.dim {
            1 => self.m[0][0] > 0.0,
            _ => self.m[0][0] > 0.0 && self.det() > 0.0,
        }
    }

    /// Inverse; fails with the condition number when effectively singular.
    pub fn inverse(&self) -> Result<SymMatrix> {
        let cond = self.condition_number();
        if !cond.is_finite() || cond > 1e12 {
            return Err(Error::SingularCovariance { cond });
        }
        match self.dim {
            1 => Ok(SymMatrix::dim1(1.0 / self.m[0][0])),
            _ => {
                let d = self.det();
                Ok(SymMatrix::dim2(self.m[1][1] / d, -self.m[0][1] / d, self.m[0][0] / d))
            }
        }
    }

    /// Quadratic form `d' M d` where `d` has `dim` entries.
    pub fn quad_form(&self, d: &[f64]) -> f64 {
        match self.dim {
            1 => self.m[0][0] * d[0] * d[0],
            _ => {
                self.m[0][0] * d[0] * d[0]
                    + 2.0 * self.m[0][1] * d[0] * d[1]
                    + self.m[1][1] * d[1] * d[1]
            }
        }
    }

    /// Lower Cholesky factor of a positive definite matrix.
    pub fn cholesky(&self) -> Result<[[f64; 2]; 2]> {
        if !self.is_positive_definite() {
            return Err(Error::InvalidParameter("matrix is not positive definite".into()));
        }
        match self.dim {
            1 => Ok([[self.m[0][0].sqrt(), 0.0], [0.0, 0.0]]),
            _ => {
                let l00 = self.m[0][0].sqrt();
                let l10 = self.m[0][1] / l00;
                let l11 = (self.m[1][1] - l10 * l10).sqrt();
                Ok([[l00, 0.0], [l10, l11]])
            }
        }
    }
}
