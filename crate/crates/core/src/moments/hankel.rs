use serde::{Deserialize, Serialize};

use super::MomentSequence;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};

/// `(k+1) x (k+1)` Hankel matrix with entry `(i, j) = m_{i+j+1}`.
pub fn hankel_matrix(moments: &[f64], order: usize) -> Result<ComplexMatrix> {
    let needed = 2 * order + 1;
    if moments.len() < needed {
        return Err(Error::TooFewMoments {
            needed,
            got: moments.len(),
        });
    }
    let n = order + 1;
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            values.push(moments[i + j]);
        }
    }
    ComplexMatrix::from_real(n, n, &values)
}

pub fn hankel_min_eigenvalue(moments: &[f64], order: usize) -> Result<f64> {
    Ok(hermitian_eigenvalues(&hankel_matrix(moments, order)?)?.min())
}

/// Principal-minor residuals of the normalized second Hankel matrix
/// `[[1, q2, q3], [q2, q3, q4], [q3, q4, q5]]`; a negative value means
/// the matrix is not positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinorResiduals {
    pub q3: f64,
    pub q5: f64,
    pub q3_minus_q2_sq: f64,
    pub q3q5_minus_q4_sq: f64,
    pub q5_minus_q3_sq: f64,
    pub det_s2: f64,
}

impl MinorResiduals {
    pub fn from_moments(q: &[f64]) -> Self {
        let (q2, q3, q4, q5) = (q[1], q[2], q[3], q[4]);
        Self {
            q3,
            q5,
            q3_minus_q2_sq: q3 - q2 * q2,
            q3q5_minus_q4_sq: q3 * q5 - q4 * q4,
            q5_minus_q3_sq: q5 - q3 * q3,
            det_s2: q3 * q5 - q4 * q4 - q2 * q2 * q5 + 2.0 * q2 * q3 * q4 - q3 * q3 * q3,
        }
    }

    pub fn named(&self) -> [(&'static str, f64); 6] {
        [
            ("q3", self.q3),
            ("q5", self.q5),
            ("q3-q2^2", self.q3_minus_q2_sq),
            ("q3*q5-q4^2", self.q3q5_minus_q4_sq),
            ("q5-q3^2", self.q5_minus_q3_sq),
            ("det(S2)", self.det_s2),
        ]
    }

    pub fn min(&self) -> f64 {
        self.named().iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HankelReport {
    pub s1: [[f64; 2]; 2],
    pub s2: [[f64; 3]; 3],
    /// Present when at least seven moments are available.
    pub s3: Option<[[f64; 4]; 4]>,
    pub min_eig_s1: f64,
    pub min_eig_s2: f64,
    pub min_eig_s3: Option<f64>,
    /// Evaluated only for normalized sequences.
    pub minors: Option<MinorResiduals>,
}

fn to_array<const N: usize>(m: &ComplexMatrix) -> [[f64; N]; N] {
    let mut out = [[0.0; N]; N];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)].re;
        }
    }
    out
}

pub fn hankel_report(q: &MomentSequence) -> Result<HankelReport> {
    let m = q.values();
    if m.len() < 5 {
        return Err(Error::TooFewMoments {
            needed: 5,
            got: m.len(),
        });
    }
    let s1 = hankel_matrix(m, 1)?;
    let s2 = hankel_matrix(m, 2)?;
    let (s3, min_eig_s3) = if m.len() >= 7 {
        let s3 = hankel_matrix(m, 3)?;
        let min = hermitian_eigenvalues(&s3)?.min();
        (Some(to_array::<4>(&s3)), Some(min))
    } else {
        (None, None)
    };
    Ok(HankelReport {
        min_eig_s1: hermitian_eigenvalues(&s1)?.min(),
        min_eig_s2: hermitian_eigenvalues(&s2)?.min(),
        s1: to_array::<2>(&s1),
        s2: to_array::<3>(&s2),
        s3,
        min_eig_s3,
        minors: q.is_normalized().then(|| MinorResiduals::from_moments(m)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn layout_matches_moment_indices() {
        let q = MomentSequence::new(vec![1.0, 2.0, 3.0, 4.0, 5.0], false).unwrap();
        let r = hankel_report(&q).unwrap();
        assert_eq!(r.s1, [[1.0, 2.0], [2.0, 3.0]]);
        assert_eq!(r.s2, [[1.0, 2.0, 3.0], [2.0, 3.0, 4.0], [3.0, 4.0, 5.0]]);
        assert!(r.s3.is_none());
        assert!(r.minors.is_none());
    }

    #[test]
    fn white_noise_passes_everything() {
        let q = MomentSequence::new(vec![1.0, 0.25, 1.0 / 16.0, 1.0 / 64.0, 1.0 / 256.0], true).unwrap();
        let r = hankel_report(&q).unwrap();
        assert!(r.min_eig_s1 >= -1e-15);
        assert!(r.min_eig_s2 >= -1e-15);
        assert!(r.minors.unwrap().min() >= -1e-15);
    }

    #[test]
    fn bell_pt_moments_violate_s1() {
        // spectrum (-1/2, 1/2, 1/2, 1/2)
        let spec = [-0.5f64, 0.5, 0.5, 0.5];
        let q: Vec<f64> = (1..=5).map(|k| spec.iter().map(|l| l.powi(k)).sum()).collect();
        let r = hankel_report(&MomentSequence::new(q, true).unwrap()).unwrap();
        let minors = r.minors.unwrap();
        assert_abs_diff_eq!(minors.q3_minus_q2_sq, -0.75, epsilon = 1e-15);
        assert!(r.min_eig_s1 < 0.0);
    }

    #[test]
    fn determinant_residual_matches_direct_determinant() {
        let q = [1.0, 0.4, 0.2, 0.13, 0.09];
        let m = MinorResiduals::from_moments(&q);
        let det =
            1.0 * (q[2] * q[4] - q[3] * q[3]) - q[1] * (q[1] * q[4] - q[3] * q[2]) + q[2] * (q[1] * q[3] - q[2] * q[2]);
        assert_abs_diff_eq!(m.det_s2, det, epsilon = 1e-15);
    }

    #[test]
    fn too_few_moments() {
        let q = MomentSequence::new(vec![1.0, 0.5, 0.3, 0.2], true).unwrap();
        assert!(matches!(
            hankel_report(&q),
            Err(Error::TooFewMoments { needed: 5, got: 4 })
        ));
        assert!(hankel_matrix(&[1.0, 2.0], 1).is_err());
    }

    #[test]
    fn s3_reported_with_seven_moments() {
        let q = MomentSequence::new(vec![1.0, 0.5, 0.3, 0.2, 0.15, 0.12, 0.1], true).unwrap();
        let r = hankel_report(&q).unwrap();
        assert_eq!(r.s3.unwrap()[3][3], 0.1);
        assert!(r.min_eig_s3.is_some());
    }
}
