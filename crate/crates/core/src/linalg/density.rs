use num_complex::Complex64;

use super::eigen::{hermitian_eigenvalues, Spectrum};
use super::matrix::ComplexMatrix;
use super::partial::{check_layout, partial_trace_matrix, partial_transpose_matrix};
use crate::error::{Error, Result};
use crate::tolerance;

/// Validation thresholds for [`DensityMatrix`].
#[derive(Debug, Clone, Copy)]
pub struct StateTolerance {
    pub hermitian: f64,
    pub trace: f64,
    pub psd: f64,
}

impl Default for StateTolerance {
    fn default() -> Self {
        Self {
            hermitian: tolerance::HERMITIAN,
            trace: tolerance::UNIT_TRACE,
            psd: tolerance::PSD,
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix over a tensor
/// product of subsystems with dimensions `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::new_with_tol(matrix, dims, &StateTolerance::default())
    }

    pub fn new_with_tol(matrix: ComplexMatrix, dims: Vec<usize>, tol: &StateTolerance) -> Result<Self> {
        check_layout(&matrix, &dims, 0)?;
        let deviation = matrix.hermitian_deviation();
        if deviation > tol.hermitian {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {deviation:e})")));
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > tol.trace {
            return Err(Error::InvalidState(format!("trace {trace} is not 1")));
        }
        let min = hermitian_eigenvalues(&matrix)?.min();
        if min < -tol.psd {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(Self { matrix, dims })
    }

    /// Normalizes `matrix` by its trace before validating.
    pub fn from_unnormalized(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let tr = matrix.trace().re;
        if tr.abs() < tolerance::ZERO_TRACE {
            return Err(Error::ZeroTrace { trace: tr });
        }
        Self::new(matrix.scale(1.0 / tr), dims)
    }

    /// |psi><psi| for a normalized state vector.
    pub fn pure(psi: &[Complex64], dims: Vec<usize>) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let normalized: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::projector(&normalized), dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        Self {
            matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64),
            dims,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn spectrum(&self) -> Spectrum {
        hermitian_eigenvalues(&self.matrix).expect("density matrices are Hermitian")
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        self.spectrum().power_sum(2)
    }

    pub fn partial_transpose(&self, party: usize) -> Result<ComplexMatrix> {
        partial_transpose_matrix(&self.matrix, &self.dims, party)
    }

    pub fn partial_trace(&self, keep: usize) -> Result<ComplexMatrix> {
        partial_trace_matrix(&self.matrix, &self.dims, keep)
    }
}
