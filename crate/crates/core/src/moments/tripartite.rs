use serde::{Deserialize, Serialize};

use super::{moment_sequence, MomentSequence};
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::maps::{apply_partial, SignedKrausMap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripartiteMoments {
    /// Moments with the map applied to party A, B and C respectively.
    pub per_party: [MomentSequence; 3],
    /// Order-by-order geometric mean of the three sequences.
    pub combined: MomentSequence,
}

/// Real cube root of `a b c`. Mixed signs are rejected.
pub fn geometric_mean_moment(values: [f64; 3], order: usize) -> Result<f64> {
    let [a, b, c] = values;
    if a == b && b == c {
        return Ok(a);
    }
    let positive = values.iter().filter(|&&v| v > 0.0).count();
    if positive != 0 && positive != 3 {
        return Err(Error::NegativeGeometricMeanInput { order });
    }
    Ok((a * b * c).cbrt())
}

/// Applies `map` to each of the three parties in turn and combines the
/// moment sequences by a geometric mean per order.
pub fn tripartite_moments(
    rho: &DensityMatrix,
    map: &SignedKrausMap,
    n: usize,
    normalize: bool,
) -> Result<TripartiteMoments> {
    if rho.parties() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "tripartite moments need three subsystems, got dims {:?}",
            rho.dims()
        )));
    }
    let seq = |party| -> Result<MomentSequence> {
        let mapped = apply_partial(map, rho, party)?;
        moment_sequence(&mapped.hermitian_part(), n, normalize)
    };
    let per_party = [seq(0)?, seq(1)?, seq(2)?];
    let combined = (0..n)
        .map(|i| {
            geometric_mean_moment(
                [
                    per_party[0].values()[i],
                    per_party[1].values()[i],
                    per_party[2].values()[i],
                ],
                i + 1,
            )
        })
        .collect::<Result<Vec<f64>>>()?;
    let combined = MomentSequence::new(combined, normalize)?;
    Ok(TripartiteMoments { per_party, combined })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::lambda1;
    use crate::states::{ghz_noise, random_separable};
    use approx::assert_abs_diff_eq;

    #[test]
    fn geometric_mean_rules() {
        assert_eq!(geometric_mean_moment([0.3, 0.3, 0.3], 1).unwrap(), 0.3);
        assert_abs_diff_eq!(geometric_mean_moment([1.0, 2.0, 4.0], 1).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            geometric_mean_moment([-1.0, -2.0, -4.0], 1).unwrap(),
            -2.0,
            epsilon = 1e-15
        );
        assert!(matches!(
            geometric_mean_moment([1.0, -2.0, 4.0], 3),
            Err(Error::NegativeGeometricMeanInput { order: 3 })
        ));
        assert!(geometric_mean_moment([1.0, 0.0, 4.0], 2).is_err());
    }

    #[test]
    fn symmetric_state_returns_common_sequence() {
        let rho = ghz_noise(0.3).unwrap();
        let t = tripartite_moments(&rho, &lambda1(), 5, false).unwrap();
        for i in 0..5 {
            assert_abs_diff_eq!(t.combined.values()[i], t.per_party[2].values()[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn needs_three_parties() {
        let rho = crate::states::werner(0.5).unwrap();
        assert!(tripartite_moments(&rho, &lambda1(), 5, true).is_err());
        let qutrits = random_separable(&[3, 3, 3], 1, 0).unwrap();
        assert!(matches!(
            tripartite_moments(&qutrits, &lambda1(), 5, true),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
