//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a[p][q]` and then
//! applies the classical real Jacobi rotation, so the iteration stays
//! inside the Hermitian matrices and converges quadratically once the
//! off-diagonal mass is small.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};
use crate::tolerance;

/// Real eigenvalues sorted ascending, with multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts the supplied values ascending.
    pub fn from_unsorted(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        Self { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Sum of `lambda^k` over the spectrum.
    pub fn power_sum(&self, k: u32) -> f64 {
        self.eigenvalues.iter().map(|&l| l.powi(k as i32)).sum()
    }

    /// True when every eigenvalue is at least `-tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min() >= -tol
    }

    /// Largest entrywise gap to another spectrum of the same length.
    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.eigenvalues
            .iter()
            .zip(&other.eigenvalues)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct JacobiOptions {
    /// Required Hermiticity of the input.
    pub hermitian_tol: f64,
    /// Stop once the off-diagonal Frobenius norm drops below
    /// `off_diagonal_tol * max(1, ||A||_F)`.
    pub off_diagonal_tol: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        Self {
            hermitian_tol: tolerance::EIGEN_INPUT_HERMITIAN,
            off_diagonal_tol: tolerance::JACOBI_OFF_DIAGONAL,
            max_sweeps: tolerance::JACOBI_MAX_SWEEPS,
        }
    }
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Spectrum> {
    hermitian_eigenvalues_with(m, &JacobiOptions::default())
}

pub fn hermitian_eigenvalues_with(m: &ComplexMatrix, opts: &JacobiOptions) -> Result<Spectrum> {
    m.ensure_square()?;
    let deviation = m.hermitian_deviation();
    if deviation > opts.hermitian_tol {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.dim();
    let mut a: Vec<Complex64> = m.hermitian_part().as_slice().to_vec();
    let idx = |i: usize, j: usize| i * n + j;
    let threshold = opts.off_diagonal_tol * m.frobenius_norm().max(1.0);

    let off_norm = |a: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[idx(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off < threshold {
            break;
        }
        if sweeps == opts.max_sweeps {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[idx(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[idx(p, p)].re;
                let aqq = a[idx(q, q)].re;
                // Classical rotation on the dephased pivot.
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase = apq / mag;
                // Rotation J restricted to (p, q):
                // [[c, s], [-s * conj(phase), c * conj(phase)]] composed so
                // that (J^dagger A J)[p][q] vanishes.
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;

                // A <- A J (columns p, q)
                for k in 0..n {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = akp * jpp + akq * jqp;
                    a[idx(k, q)] = akp * jpq + akq * jqq;
                }
                // A <- J^dagger A (rows p, q)
                for k in 0..n {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[idx(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[idx(p, q)] = ZERO;
                a[idx(q, p)] = ZERO;
                a[idx(p, p)] = Complex64::new(a[idx(p, p)].re, 0.0);
                a[idx(q, q)] = Complex64::new(a[idx(q, q)].re, 0.0);
            }
        }
    }
    Ok(Spectrum::from_unsorted((0..n).map(|i| a[idx(i, i)].re).collect()))
}

/// Tr(m^k) by repeated multiplication.
///
/// The imaginary part must vanish to [`tolerance::REAL_TRACE`] when `m` is
/// Hermitian; it is discarded afterwards.
pub fn trace_power(m: &ComplexMatrix, k: u32) -> Result<f64> {
    m.ensure_square()?;
    if k == 0 {
        return Err(Error::DomainError("trace power requires k >= 1".into()));
    }
    let mut acc = m.clone();
    for _ in 1..k {
        acc = acc.matmul(m)?;
    }
    let tr = acc.trace();
    let scale = m.frobenius_norm().max(1.0).powi(k as i32);
    if m.is_hermitian(tolerance::EIGEN_INPUT_HERMITIAN) && tr.im.abs() > tolerance::REAL_TRACE * scale {
        return Err(Error::NonRealTrace { imag: tr.im });
    }
    Ok(tr.re)
}

/// Tr(m^k) for general square `m`, keeping the imaginary part.
pub fn trace_power_complex(m: &ComplexMatrix, k: u32) -> Result<Complex64> {
    m.ensure_square()?;
    if k == 0 {
        return Err(Error::DomainError("trace power requires k >= 1".into()));
    }
    let mut acc = m.clone();
    for _ in 1..k {
        acc = acc.matmul(m)?;
    }
    Ok(acc.trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bell_pt() -> ComplexMatrix {
        // (|phi><phi|)^{T_B} for phi = (|00> + |11>)/sqrt(2)
        ComplexMatrix::from_real(
            4,
            4,
            &[
                0.5, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.5, 0.0, //
                0.0, 0.5, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.5,
            ],
        )
        .unwrap()
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let s = hermitian_eigenvalues(&ComplexMatrix::diag_real(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(s.eigenvalues(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = ComplexMatrix::new(
            2,
            2,
            vec![ZERO, Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), ZERO],
        )
        .unwrap();
        let s = hermitian_eigenvalues(&y).unwrap();
        assert_abs_diff_eq!(s.eigenvalues()[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues()[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let s = hermitian_eigenvalues(&bell_pt()).unwrap();
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in s.eigenvalues().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian { .. })));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigenvalues(&rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn zero_sweep_budget_reports_no_convergence() {
        let opts = JacobiOptions {
            max_sweeps: 0,
            ..JacobiOptions::default()
        };
        assert!(matches!(
            hermitian_eigenvalues_with(&bell_pt(), &opts),
            Err(Error::NoConvergence { sweeps: 0, .. })
        ));
    }

    #[test]
    fn trace_power_examples() {
        assert_abs_diff_eq!(trace_power(&ComplexMatrix::identity(3), 4).unwrap(), 3.0);
        let mixed = ComplexMatrix::identity(4).scale(0.25);
        assert_abs_diff_eq!(trace_power(&mixed, 3).unwrap(), 1.0 / 16.0, epsilon = 1e-15);
        assert_abs_diff_eq!(trace_power(&bell_pt(), 3).unwrap(), 0.25, epsilon = 1e-15);
        assert!(trace_power(&mixed, 0).is_err());
    }

    #[test]
    fn complex_rotation_handles_phases() {
        // Hermitian with complex off-diagonals; eigenvalues of
        // [[2, i, 0], [-i, 2, 1+i], [0, 1-i, 1]] checked through the
        // invariants trace, Tr(A^2), det.
        let c = Complex64::new;
        let m = ComplexMatrix::new(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(0.0, 1.0),
                ZERO,
                c(0.0, -1.0),
                c(2.0, 0.0),
                c(1.0, 1.0),
                ZERO,
                c(1.0, -1.0),
                c(1.0, 0.0),
            ],
        )
        .unwrap();
        let s = hermitian_eigenvalues(&m).unwrap();
        assert_abs_diff_eq!(s.sum(), 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.power_sum(2), trace_power(&m, 2).unwrap(), epsilon = 1e-12);
        assert_abs_diff_eq!(s.power_sum(3), trace_power(&m, 3).unwrap(), epsilon = 1e-12);
    }
}
