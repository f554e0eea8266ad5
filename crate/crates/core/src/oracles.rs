//! Spectral ground truth used to validate moment-based verdicts.
//!
//! Moments of a positive semidefinite matrix always give positive
//! semidefinite Hankel matrices. Every evaluation is therefore checked
//! against the full spectrum of the mapped matrix: a PSD spectrum paired
//! with a negative Hankel witness is an internal error, never a detection.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, DensityMatrix, Spectrum};
use crate::maps::{apply_partial, MapId, SignedKrausMap};
use crate::moments::{
    hankel_report, moments_from_spectrum, optimal_bound, HankelReport, MinorResiduals, MomentSequence,
};
use crate::states::random_separable;
use crate::tolerance;

/// Partial-transpose minimum eigenvalue of one subsystem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartyPpt {
    pub party: usize,
    pub min_eigenvalue: f64,
    pub npt: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PptCheck {
    pub parties: Vec<PartyPpt>,
    pub npt: bool,
}

impl PptCheck {
    pub fn min_eigenvalue(&self) -> f64 {
        self.parties
            .iter()
            .map(|p| p.min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Minimum eigenvalue of the partial transpose on every subsystem.
pub fn ppt_check(rho: &DensityMatrix) -> Result<PptCheck> {
    let parties = (0..rho.parties())
        .map(|party| {
            let min = hermitian_eigenvalues(&rho.partial_transpose(party)?)?.min();
            Ok(PartyPpt {
                party,
                min_eigenvalue: min,
                npt: min < -tolerance::DETECTION,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let npt = parties.iter().any(|p| p.npt);
    Ok(PptCheck { parties, npt })
}

/// Spectrum of `map` applied to subsystem `party`.
pub fn mapped_spectrum(rho: &DensityMatrix, map: &SignedKrausMap, party: usize) -> Result<Spectrum> {
    hermitian_eigenvalues(&apply_partial(map, rho, party)?.hermitian_part())
}

fn bipartite_dims(rho: &DensityMatrix) -> Result<(usize, usize)> {
    match *rho.dims() {
        [a, b] => Ok((a, b)),
        _ => Err(Error::NotBipartite { parties: rho.parties() }),
    }
}

/// Realigned matrix `R(X)_{(i,k),(j,l)} = X_{(i,j),(k,l)}`, of shape
/// `dA^2 x dB^2`.
pub fn realignment(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let (da, db) = bipartite_dims(rho)?;
    Ok(realign(rho.matrix(), da, db))
}

fn realign(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(da * da, db * db, |row, col| {
        let (i, k) = (row / da, row % da);
        let (j, l) = (col / db, col % db);
        m[(i * db + j, k * db + l)]
    })
}

/// Sum of singular values of the realigned matrix; above 1 certifies
/// entanglement.
pub fn realignment_trace_norm(rho: &DensityMatrix) -> Result<f64> {
    let r = realignment(rho)?;
    let gram = r.adjoint().matmul(&r)?.hermitian_part();
    Ok(hermitian_eigenvalues(&gram)?
        .eigenvalues()
        .iter()
        .map(|s| s.max(0.0).sqrt())
        .sum())
}

/// `Tr(R^k)` for `k = 1..=n` by repeated multiplication. The realigned
/// matrix is square only when both subsystems have the same dimension.
pub fn realignment_moments(rho: &DensityMatrix, n: usize) -> Result<Vec<Complex64>> {
    let (da, db) = bipartite_dims(rho)?;
    if da != db {
        return Err(Error::DimensionMismatch(format!(
            "realignment moments need equal subsystem dimensions, got {da}x{db}"
        )));
    }
    let r = realign(rho.matrix(), da, db);
    let mut power = r.clone();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        if k > 1 {
            power = power.matmul(&r)?;
        }
        out.push(power.trace());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappedSpectrum {
    pub map: String,
    pub party: usize,
    pub spectrum: Spectrum,
}

/// Everything the oracles know about one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub ppt: PptCheck,
    pub mapped_spectra: Vec<MappedSpectrum>,
    /// `(re, im)` of `Tr(R^k)`; absent for non-square or multipartite layouts.
    pub realignment_moments: Option<Vec<(f64, f64)>>,
    pub realignment_trace_norm: Option<f64>,
    pub notes: Vec<String>,
}

/// Builds the oracle report for `rho` with the given `(map, party)` pairs.
pub fn oracle_report(rho: &DensityMatrix, maps: &[(&SignedKrausMap, usize)], n: usize) -> Result<OracleReport> {
    let ppt = ppt_check(rho)?;
    let mut notes = Vec::new();
    let mapped_spectra = maps
        .iter()
        .map(|&(map, party)| {
            let spectrum = mapped_spectrum(rho, map, party)?;
            if spectrum.is_psd(tolerance::PSD) && ppt.npt && map.name().starts_with("transpose") {
                notes.push(format!(
                    "{} on party {party} is PSD while another party is NPT",
                    map.name()
                ));
            }
            Ok(MappedSpectrum {
                map: map.name().to_string(),
                party,
                spectrum,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (realignment_moments, realignment_trace_norm) = match rho.dims() {
        [a, b] if a == b => (
            Some(realignment_moments(rho, n)?.into_iter().map(|z| (z.re, z.im)).collect()),
            Some(realignment_trace_norm(rho)?),
        ),
        [_, _] => {
            notes.push("realignment moments skipped: unequal subsystem dimensions".to_string());
            (None, Some(realignment_trace_norm(rho)?))
        }
        _ => (None, None),
    };
    Ok(OracleReport {
        ppt,
        mapped_spectra,
        realignment_moments,
        realignment_trace_norm,
        notes,
    })
}

/// Checks the PSD-spectrum-implies-PSD-Hankel property for one evaluation.
/// Returns a description of the violation, if any.
pub fn consistency_violation(
    spectrum: &Spectrum,
    hankel: &HankelReport,
    minors: Option<&MinorResiduals>,
) -> Option<String> {
    if !spectrum.is_psd(tolerance::PSD) {
        return None;
    }
    let tol = tolerance::CONSISTENCY;
    let mut bad = Vec::new();
    if hankel.min_eig_s1 < -tol {
        bad.push(format!("S1 = {:e}", hankel.min_eig_s1));
    }
    if hankel.min_eig_s2 < -tol {
        bad.push(format!("S2 = {:e}", hankel.min_eig_s2));
    }
    if let Some(m) = minors {
        for (name, v) in m.named() {
            if v < -tol {
                bad.push(format!("{name} = {v:e}"));
            }
        }
    }
    (!bad.is_empty()).then(|| {
        format!(
            "PSD mapped spectrum (min {:e}) with negative Hankel data: {}",
            spectrum.min(),
            bad.join(", ")
        )
    })
}

/// Most negative value among all moment witnesses of one mapped spectrum:
/// S1 and S2 of raw and normalized moments, the six minor residuals,
/// `q3 - q2^2` and the optimal cubic bound.
pub fn worst_witness(spectrum: &Spectrum) -> Result<(f64, &'static str)> {
    let raw = moments_from_spectrum(spectrum, 5, false)?;
    let normalized = moments_from_spectrum(spectrum, 5, true)?;
    let mut worst = (f64::INFINITY, "");
    let mut see = |v: f64, name: &'static str| {
        if v < worst.0 {
            worst = (v, name);
        }
    };
    let hr = hankel_report(&raw)?;
    see(hr.min_eig_s1, "S1 (raw)");
    see(hr.min_eig_s2, "S2 (raw)");
    let hn = hankel_report(&normalized)?;
    see(hn.min_eig_s1, "S1");
    see(hn.min_eig_s2, "S2");
    let minors = MinorResiduals::from_moments(normalized.values());
    for (name, v) in minors.named() {
        see(v, name);
    }
    let (q2, q3) = (normalized.moment(2), normalized.moment(3));
    see(q3 - q2 * q2, "q3-L");
    see(q3 - optimal_bound(q2)?.bound, "q3-OL");
    Ok(worst)
}

/// Outcome of [`separable_sweep`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub trials: usize,
    pub evaluations: usize,
    pub worst_witness: f64,
    /// `(seed, map, party, witness name)` of the worst evaluation.
    pub worst_case: Option<(u64, String, usize, String)>,
    pub consistency_violations: usize,
}

/// Runs `trials` seeded random separable states through every map on
/// every subsystem whose dimension the map accepts.
///
/// Trial `t` uses seed `seed + t` and `1 + t mod D` product terms, where
/// `D` is the total dimension, so pure product states are included.
pub fn separable_sweep(trials: usize, dims: &[usize], maps: &[MapId], seed: u64) -> Result<SweepReport> {
    if trials == 0 {
        return Err(Error::DomainError("sweep needs at least one trial".to_string()));
    }
    let total: usize = dims.iter().product();
    let mut built = Vec::new();
    for id in maps {
        for (party, &d) in dims.iter().enumerate() {
            if let Ok(map) = id.build(d) {
                built.push((map, party));
            }
        }
    }
    if built.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "no map in the list acts on a subsystem of {dims:?}"
        )));
    }
    let mut report = SweepReport {
        trials,
        evaluations: 0,
        worst_witness: f64::INFINITY,
        worst_case: None,
        consistency_violations: 0,
    };
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        let rho = random_separable(dims, 1 + t % total, s)?;
        for (map, party) in &built {
            let spectrum = mapped_spectrum(&rho, map, *party)?;
            let (w, name) = worst_witness(&spectrum)?;
            report.evaluations += 1;
            if w < report.worst_witness {
                report.worst_witness = w;
                report.worst_case = Some((s, map.name().to_string(), *party, name.to_string()));
            }
            let normalized = moments_from_spectrum(&spectrum, 5, true)?;
            let raw = moments_from_spectrum(&spectrum, 5, false)?;
            let minors = MinorResiduals::from_moments(normalized.values());
            let violated = consistency_violation(&spectrum, &hankel_report(&raw)?, Some(&minors)).is_some()
                || consistency_violation(&spectrum, &hankel_report(&normalized)?, None).is_some();
            crate::evaluate::record_consistency(violated);
            if violated {
                report.consistency_violations += 1;
            }
        }
    }
    Ok(report)
}

/// Hankel data built from the first `n` moments of `spectrum`; convenience
/// for callers that already hold a spectrum.
pub fn spectrum_hankel(spectrum: &Spectrum, n: usize, normalize: bool) -> Result<(MomentSequence, HankelReport)> {
    let q = moments_from_spectrum(spectrum, n, normalize)?;
    let h = hankel_report(&q)?;
    Ok((q, h))
}
