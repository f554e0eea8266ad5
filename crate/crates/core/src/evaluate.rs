//! One-call evaluation of a (state, map, party) triple, plus threshold
//! search by bisection.

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, DensityMatrix, Spectrum};
use crate::maps::{apply_partial, Convention, MapId, SignedKrausMap};
use crate::moments::{
    hankel_report, hankel_verdict, moments_from_spectrum, optimal_bound, Criterion, CriterionVerdict, HankelReport,
    MinorResiduals, MomentSequence,
};
use crate::oracles::consistency_violation;
use crate::tolerance;

static EVALUATIONS: AtomicUsize = AtomicUsize::new(0);
static VIOLATIONS: AtomicUsize = AtomicUsize::new(0);

/// `(evaluations, consistency violations)` recorded by this process so far.
pub fn consistency_counters() -> (usize, usize) {
    (EVALUATIONS.load(Ordering::Relaxed), VIOLATIONS.load(Ordering::Relaxed))
}

pub(crate) fn record_consistency(violated: bool) {
    EVALUATIONS.fetch_add(1, Ordering::Relaxed);
    if violated {
        VIOLATIONS.fetch_add(1, Ordering::Relaxed);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Number of moments, at least 5.
    pub n: usize,
    /// Build the Hankel matrices from `m_k / m_1^k` instead of raw traces.
    pub normalize: bool,
    pub tolerance: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            n: 5,
            normalize: false,
            tolerance: tolerance::DETECTION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub map: String,
    pub convention: Option<Convention>,
    pub party: usize,
    /// Moments feeding the Hankel matrices (raw or normalized per options).
    pub moments: MomentSequence,
    /// Normalized moments; absent when the mapped trace vanishes.
    pub normalized: Option<MomentSequence>,
    pub hankel: HankelReport,
    pub minors: Option<MinorResiduals>,
    pub verdicts: Vec<CriterionVerdict>,
    pub mapped_spectrum: Spectrum,
    /// Set when a PSD mapped spectrum came with negative Hankel data.
    pub consistency_violation: Option<String>,
    pub notes: Vec<String>,
}

impl Evaluation {
    pub fn verdict(&self, criterion: Criterion) -> Option<&CriterionVerdict> {
        self.verdicts.iter().find(|v| v.criterion == criterion)
    }

    pub fn witness(&self, criterion: Criterion) -> Option<f64> {
        self.verdict(criterion).map(|v| v.witness_value)
    }

    pub fn detected(&self) -> bool {
        self.verdicts.iter().any(|v| v.detected)
    }
}

pub fn evaluate(rho: &DensityMatrix, map: &SignedKrausMap, party: usize, opts: &EvalOptions) -> Result<Evaluation> {
    if opts.n < 5 {
        return Err(Error::TooFewMoments { needed: 5, got: opts.n });
    }
    let mapped = apply_partial(map, rho, party)?;
    let spectrum = hermitian_eigenvalues(&mapped.hermitian_part())?;
    let mut notes = Vec::new();

    let normalized = match moments_from_spectrum(&spectrum, opts.n, true) {
        Ok(q) => Some(q),
        Err(Error::ZeroTrace { trace }) => {
            notes.push(format!("mapped trace {trace:e} vanishes; normalized criteria skipped"));
            None
        }
        Err(e) => return Err(e),
    };
    let moments = if opts.normalize {
        normalized.clone().ok_or(Error::ZeroTrace { trace: spectrum.sum() })?
    } else {
        moments_from_spectrum(&spectrum, opts.n, false)?
    };
    let hankel = hankel_report(&moments)?;
    let minors = normalized.as_ref().map(|q| MinorResiduals::from_moments(q.values()));

    let mut verdicts = hankel_verdict(&hankel, opts.tolerance);
    if let Some(q) = &normalized {
        let (q2, q3) = (q.moment(2), q.moment(3));
        let (quadratic, optimal) = if map.name().starts_with("transpose") {
            (Criterion::P3, Criterion::P3Oppt)
        } else {
            (Criterion::Q3Lambda, Criterion::Q3OptimalLambda)
        };
        verdicts.push(CriterionVerdict::new(quadratic, q3 - q2 * q2, opts.tolerance));
        match optimal_bound(q2) {
            Ok(ob) => {
                let (k_name, y_name) = if optimal == Criterion::P3Oppt {
                    ("alpha", "y")
                } else {
                    ("beta", "x")
                };
                let mut v = CriterionVerdict::new(optimal, q3 - ob.bound, opts.tolerance);
                v.parameters = vec![
                    (k_name.to_string(), ob.k),
                    (y_name.to_string(), ob.y),
                    ("bound".to_string(), ob.bound),
                ];
                verdicts.push(v);
            }
            Err(Error::DomainError(msg)) => {
                notes.push(format!(
                    "{optimal} skipped: {msg}; the spectrum must contain a negative value"
                ));
            }
            Err(e) => return Err(e),
        }
    }

    let violation = consistency_violation(&spectrum, &hankel, minors.as_ref());
    record_consistency(violation.is_some());

    Ok(Evaluation {
        map: map.name().to_string(),
        convention: map.convention(),
        party,
        moments,
        normalized,
        hankel,
        minors,
        verdicts,
        mapped_spectrum: spectrum,
        consistency_violation: violation,
        notes,
    })
}

/// Builds `id` for the dimension of `party` and evaluates.
pub fn evaluate_id(rho: &DensityMatrix, id: &MapId, party: usize, opts: &EvalOptions) -> Result<Evaluation> {
    let dim = *rho.dims().get(party).ok_or(Error::BadParty {
        party,
        parties: rho.parties(),
    })?;
    evaluate(rho, &id.build(dim)?, party, opts)
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol`.
pub fn bisect(mut f: impl FnMut(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if (f_lo < 0.0) == (f_hi < 0.0) {
        return Err(Error::DomainError(format!(
            "no sign change on [{lo}, {hi}]: f = {f_lo:e}, {f_hi:e}"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First point of a uniform `points`-grid on `[lo, hi]` where `f` drops
/// below `-threshold`, refined by bisection on `f + threshold`.
pub fn first_crossing(
    mut f: impl FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    points: usize,
    threshold: f64,
    tol: f64,
) -> Result<Option<f64>> {
    let step = (hi - lo) / (points - 1) as f64;
    let mut prev = lo;
    for i in 0..points {
        let x = lo + step * i as f64;
        if f(x)? < -threshold {
            if i == 0 {
                return Ok(Some(x));
            }
            return bisect(|t| Ok(f(t)? + threshold), prev, x, tol).map(Some);
        }
        prev = x;
    }
    Ok(None)
}
