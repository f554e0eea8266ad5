//! Moment sequences of mapped matrices and the criteria built on them.

mod criteria;
mod hankel;
mod tripartite;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, trace_power, ComplexMatrix, Spectrum};
use crate::tolerance;

pub use criteria::{
    hankel_verdict, optimal_bound, p3_oppt, p3_oppt_with_tol, q3_lambda, q3_lambda_with_tol, q3_optimal,
    q3_optimal_with_tol, Criterion, CriterionVerdict, OptimalBound, Outcome,
};
pub use hankel::{hankel_matrix, hankel_min_eigenvalue, hankel_report, HankelReport, MinorResiduals};
pub use tripartite::{geometric_mean_moment, tripartite_moments, TripartiteMoments};

/// Real moments `m_1..m_n` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    values: Vec<f64>,
    normalized: bool,
}

impl MomentSequence {
    pub fn new(values: Vec<f64>, normalized: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooFewMoments { needed: 1, got: 0 });
        }
        if normalized && (values[0] - 1.0).abs() >= tolerance::NORMALIZED_FIRST_MOMENT {
            return Err(Error::DomainError(format!(
                "normalized sequence must start with 1, got {}",
                values[0]
            )));
        }
        Ok(Self { values, normalized })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Moment of order `k`, 1-based.
    pub fn moment(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Rescales to unit first moment: `m_k / m_1^k`.
    pub fn to_normalized(&self) -> Result<Self> {
        if self.normalized {
            return Ok(self.clone());
        }
        let t = self.values[0];
        if t.abs() <= tolerance::ZERO_TRACE {
            return Err(Error::ZeroTrace { trace: t });
        }
        let mut values: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, m)| m / t.powi(i as i32 + 1))
            .collect();
        values[0] = 1.0;
        Ok(Self {
            values,
            normalized: true,
        })
    }
}

/// `Tr(m^k)` for `k = 1..=n`, from the spectrum of `m` (or of `m / Tr m`
/// when `normalize` is set).
pub fn moment_sequence(m: &ComplexMatrix, n: usize, normalize: bool) -> Result<MomentSequence> {
    let spectrum = hermitian_eigenvalues(m)?;
    moments_from_spectrum(&spectrum, n, normalize)
}

pub fn moments_from_spectrum(spectrum: &Spectrum, n: usize, normalize: bool) -> Result<MomentSequence> {
    if n == 0 {
        return Err(Error::TooFewMoments { needed: 1, got: 0 });
    }
    let trace = spectrum.sum();
    let scale = if normalize {
        if trace.abs() <= tolerance::ZERO_TRACE {
            return Err(Error::ZeroTrace { trace });
        }
        1.0 / trace
    } else {
        1.0
    };
    let scaled: Vec<f64> = spectrum.eigenvalues().iter().map(|l| l * scale).collect();
    let mut values: Vec<f64> = (1..=n as i32).map(|k| scaled.iter().map(|l| l.powi(k)).sum()).collect();
    if normalize {
        values[0] = 1.0;
    }
    MomentSequence::new(values, normalize)
}

/// Same moments computed by repeated matrix multiplication; used as a
/// cross-check of the spectral path.
pub fn moment_sequence_by_multiplication(m: &ComplexMatrix, n: usize, normalize: bool) -> Result<MomentSequence> {
    if n == 0 {
        return Err(Error::TooFewMoments { needed: 1, got: 0 });
    }
    let m = if normalize {
        let t = m.trace().re;
        if t.abs() <= tolerance::ZERO_TRACE {
            return Err(Error::ZeroTrace { trace: t });
        }
        m.scale(1.0 / t)
    } else {
        m.clone()
    };
    let mut values = (1..=n as u32).map(|k| trace_power(&m, k)).collect::<Result<Vec<_>>>()?;
    if normalize {
        values[0] = 1.0;
    }
    MomentSequence::new(values, normalize)
}
