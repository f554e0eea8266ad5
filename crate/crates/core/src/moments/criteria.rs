use std::fmt;

use serde::{Deserialize, Serialize};

use super::{HankelReport, MomentSequence};
use crate::error::{Error, Result};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Negativity of the first Hankel matrix of partial-transpose moments.
    P3,
    /// Optimal cubic bound on partial-transpose moments.
    P3Oppt,
    /// `q3 - q2^2 >= 0` on normalized map moments.
    Q3Lambda,
    /// Optimal cubic bound on normalized map moments.
    Q3OptimalLambda,
    HankelS1,
    HankelS2,
    HankelS3,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::P3 => "p3",
            Criterion::P3Oppt => "p3-OPPT",
            Criterion::Q3Lambda => "q3-L",
            Criterion::Q3OptimalLambda => "q3-OL",
            Criterion::HankelS1 => "S1",
            Criterion::HankelS2 => "S2",
            Criterion::HankelS3 => "S3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Detected,
    /// Witness in `[-tol, 0)`: too close to the bound to call.
    Boundary,
    NotDetected,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Detected => "detected",
            Outcome::Boundary => "inconclusive-boundary",
            Outcome::NotDetected => "not detected",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion: Criterion,
    pub detected: bool,
    pub outcome: Outcome,
    /// Negative values signal entanglement.
    pub witness_value: f64,
    pub tolerance: f64,
    /// Auxiliary quantities such as the floor index and the optimal point.
    pub parameters: Vec<(String, f64)>,
}

impl CriterionVerdict {
    pub fn new(criterion: Criterion, witness_value: f64, tolerance: f64) -> Self {
        let outcome = if witness_value < -tolerance {
            Outcome::Detected
        } else if witness_value < 0.0 {
            Outcome::Boundary
        } else {
            Outcome::NotDetected
        };
        Self {
            criterion,
            detected: outcome == Outcome::Detected,
            outcome,
            witness_value,
            tolerance,
            parameters: Vec::new(),
        }
    }

    fn with_parameter(mut self, name: &str, value: f64) -> Self {
        self.parameters.push((name.to_string(), value));
        self
    }

    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.parameters.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }
}

/// Minimum of `sum x_i^3` over probability vectors with `sum x_i^2 = p2`:
/// `k y^3 + (1 - k y)^3` with `k = floor(1/p2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalBound {
    pub k: f64,
    pub y: f64,
    pub bound: f64,
}

pub fn optimal_bound(p2: f64) -> Result<OptimalBound> {
    if !(p2 > 0.0 && p2 <= 1.0 + tolerance::SQRT_CLAMP) {
        return Err(Error::DomainError(format!("second moment {p2} outside (0, 1]")));
    }
    let inv = 1.0 / p2;
    let nearest = inv.round();
    let k = if (inv - nearest).abs() < tolerance::FLOOR_SNAP {
        nearest
    } else {
        inv.floor()
    };
    let mut radicand = k * ((k + 1.0) * p2 - 1.0);
    if radicand < 0.0 {
        if radicand < -tolerance::SQRT_CLAMP {
            return Err(Error::DomainError(format!(
                "negative square-root argument {radicand:e}"
            )));
        }
        radicand = 0.0;
    }
    let y = (k + radicand.sqrt()) / (k * (k + 1.0));
    let bound = k * y.powi(3) + (1.0 - k * y).powi(3);
    Ok(OptimalBound { k, y, bound })
}

pub fn p3_oppt(p2: f64, p3: f64) -> Result<CriterionVerdict> {
    p3_oppt_with_tol(p2, p3, tolerance::DETECTION)
}

pub fn p3_oppt_with_tol(p2: f64, p3: f64, tol: f64) -> Result<CriterionVerdict> {
    let ob = optimal_bound(p2)?;
    Ok(CriterionVerdict::new(Criterion::P3Oppt, p3 - ob.bound, tol)
        .with_parameter("alpha", ob.k)
        .with_parameter("y", ob.y)
        .with_parameter("bound", ob.bound))
}

pub fn q3_lambda(q: &MomentSequence) -> Result<CriterionVerdict> {
    q3_lambda_with_tol(q, tolerance::DETECTION)
}

pub fn q3_lambda_with_tol(q: &MomentSequence, tol: f64) -> Result<CriterionVerdict> {
    if !q.is_normalized() {
        return Err(Error::NotNormalized);
    }
    if q.len() < 3 {
        return Err(Error::TooFewMoments {
            needed: 3,
            got: q.len(),
        });
    }
    let (q2, q3) = (q.moment(2), q.moment(3));
    Ok(CriterionVerdict::new(Criterion::Q3Lambda, q3 - q2 * q2, tol))
}

pub fn q3_optimal(q: &MomentSequence) -> Result<CriterionVerdict> {
    q3_optimal_with_tol(q, tolerance::DETECTION)
}

pub fn q3_optimal_with_tol(q: &MomentSequence, tol: f64) -> Result<CriterionVerdict> {
    if !q.is_normalized() {
        return Err(Error::NotNormalized);
    }
    if q.len() < 3 {
        return Err(Error::TooFewMoments {
            needed: 3,
            got: q.len(),
        });
    }
    let (q2, q3) = (q.moment(2), q.moment(3));
    let ob = optimal_bound(q2)?;
    Ok(CriterionVerdict::new(Criterion::Q3OptimalLambda, q3 - ob.bound, tol)
        .with_parameter("beta", ob.k)
        .with_parameter("x", ob.y)
        .with_parameter("bound", ob.bound))
}

/// Hankel negativity verdicts (S1, S2 and S3 when available).
pub fn hankel_verdict(report: &HankelReport, tol: f64) -> Vec<CriterionVerdict> {
    let mut out = vec![
        CriterionVerdict::new(Criterion::HankelS1, report.min_eig_s1, tol),
        CriterionVerdict::new(Criterion::HankelS2, report.min_eig_s2, tol),
    ];
    if let Some(m) = report.min_eig_s3 {
        out.push(CriterionVerdict::new(Criterion::HankelS3, m, tol));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Brute-force minimum of sum x^3 subject to sum x = 1, sum x^2 = p2 on
    /// vectors of the form (y, ..., y, z, 0, ...) with `k` copies of y.
    fn brute_force_min_p3(p2: f64) -> f64 {
        let mut best = f64::INFINITY;
        for k in 1..=50usize {
            let kf = k as f64;
            // k y + z = 1, k y^2 + z^2 = p2 -> quadratic in y
            let a = kf * (kf + 1.0);
            let b = -2.0 * kf;
            let c = 1.0 - p2;
            let disc = b * b - 4.0 * a * c;
            if disc < 0.0 {
                continue;
            }
            for y in [(-b + disc.sqrt()) / (2.0 * a), (-b - disc.sqrt()) / (2.0 * a)] {
                let z = 1.0 - kf * y;
                if y >= 0.0 && z >= -1e-15 && z <= y + 1e-15 {
                    best = best.min(kf * y.powi(3) + z.powi(3));
                }
            }
        }
        best
    }

    #[test]
    fn bound_matches_brute_force() {
        for p2 in [0.12, 0.2, 0.26, 0.34, 0.5, 0.61, 0.9, 1.0] {
            let ob = optimal_bound(p2).unwrap();
            assert_abs_diff_eq!(ob.bound, brute_force_min_p3(p2), epsilon = 1e-12);
        }
    }

    #[test]
    fn bell_state_is_detected() {
        let v = p3_oppt(1.0, 0.25).unwrap();
        assert_eq!(v.parameter("alpha"), Some(1.0));
        assert_abs_diff_eq!(v.parameter("y").unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.witness_value, -0.75, epsilon = 1e-15);
        assert!(v.detected);
    }

    #[test]
    fn white_noise_sits_on_the_bound() {
        let v = p3_oppt(0.25, 1.0 / 16.0).unwrap();
        assert_eq!(v.parameter("alpha"), Some(4.0));
        assert_abs_diff_eq!(v.parameter("y").unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(v.witness_value, 0.0, epsilon = 1e-16);
        assert!(!v.detected);
    }

    #[test]
    fn integer_reciprocal_snaps_before_floor() {
        // 1/(1/3) evaluates to 3 - 4e-16 style roundoff for some inputs
        for k in 2..=9 {
            let p2 = 1.0 / k as f64;
            let ob = optimal_bound(p2 * (1.0 + 1e-15)).unwrap();
            assert_eq!(ob.k, k as f64);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(optimal_bound(0.0), Err(Error::DomainError(_))));
        assert!(matches!(optimal_bound(1.5), Err(Error::DomainError(_))));
        assert!(matches!(optimal_bound(f64::NAN), Err(Error::DomainError(_))));
    }

    #[test]
    fn q3_criteria_need_normalized_moments() {
        let raw = MomentSequence::new(vec![2.0, 1.0, 0.5], false).unwrap();
        assert!(matches!(q3_lambda(&raw), Err(Error::NotNormalized)));
        assert!(matches!(q3_optimal(&raw), Err(Error::NotNormalized)));
    }

    #[test]
    fn q3_lambda_on_bell_moments() {
        let q = MomentSequence::new(vec![1.0, 1.0, 0.25], true).unwrap();
        assert_abs_diff_eq!(q3_lambda(&q).unwrap().witness_value, -0.75, epsilon = 1e-15);
    }

    #[test]
    fn boundary_band() {
        let v = CriterionVerdict::new(Criterion::HankelS1, -1e-12, 1e-10);
        assert_eq!(v.outcome, Outcome::Boundary);
        assert!(!v.detected);
        let v = CriterionVerdict::new(Criterion::HankelS1, -2e-10, 1e-10);
        assert!(v.detected);
    }
}
