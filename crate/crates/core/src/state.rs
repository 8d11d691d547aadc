use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_residual, identity, min_hermitian_eigenvalue, CMatrix, CVector};

/// Numerical thresholds shared across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Smallest admissible eigenvalue of a density matrix is `-psd`.
    pub psd: f64,
    /// `|λ| ≤ zero·max(1, ‖h‖)` classifies an eigenvalue of `h` as zero.
    pub zero: f64,
    /// Stationarity residual bound, relative to `‖h‖²`.
    pub stationary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { psd: 1e-12, zero: 1e-10, stationary: 1e-10 }
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, Tolerances::default().psd)
    }

    /// Validates with a custom PSD tolerance; Hermiticity and trace use `1e-12`.
    pub fn with_tolerance(matrix: CMatrix, psd_tol: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::NotDensityMatrix {
                reason: format!("shape {}x{} is not square and non-empty", matrix.nrows(), matrix.ncols()),
            });
        }
        let herm = hermitian_residual(&matrix);
        if herm > 1e-12 * matrix.norm().max(1.0) {
            return Err(Error::NotDensityMatrix { reason: format!("not Hermitian (residual {herm:e})") });
        }
        let tr = matrix.trace();
        if (tr - c(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::NotDensityMatrix { reason: format!("trace {tr} differs from 1") });
        }
        let min = min_hermitian_eigenvalue(&matrix);
        if min < -psd_tol {
            return Err(Error::NotDensityMatrix {
                reason: format!("negative eigenvalue {min:e}"),
            });
        }
        Ok(DensityMatrix(matrix))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix(identity(n) / c(n as f64, 0.0))
    }

    /// `|ψ⟩⟨ψ|` for the normalized `psi`.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let v = psi / c(norm, 0.0);
        Ok(DensityMatrix(&v * v.adjoint()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }
}

impl AsRef<CMatrix> for DensityMatrix {
    fn as_ref(&self) -> &CMatrix {
        &self.0
    }
}
