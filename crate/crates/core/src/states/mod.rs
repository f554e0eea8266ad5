//! State families and random samplers.
//!
//! Basis labels |1>, |2>, |3> of the literature map to computational
//! indices 0, 1, 2; party 0 is the leftmost tensor factor.
//!
//! Random sampling is deterministic per seed: a `ChaCha8Rng` seeded with
//! `seed_from_u64(seed)` drives standard complex normals (Haar-random pure
//! states after normalization) and unit exponentials (flat Dirichlet
//! weights after normalization), drawn in the order documented on each
//! function.

mod text;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, kron_vec, ComplexMatrix, DensityMatrix};

pub use text::{parse_matrix_text, read_matrix_file, write_matrix_text};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn basis(d: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![re(0.0); d];
    v[i] = re(1.0);
    v
}

/// Parameterized state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Bell state mixed with white noise, parameter `w` in [0, 1].
    Werner,
    /// 2x4 bound entangled family, parameter `b` in (0, 1).
    SigmaB,
    /// 3x3 family mixing a maximally entangled state with two separable
    /// states, parameter `alpha` in [2, 5].
    RhoAlpha,
    /// 3x3 bound entangled family, parameter `a` in (0, 1).
    SigmaA,
    /// GHZ state mixed with white noise, `gamma` in [0, 1] is the noise weight.
    Ghz,
    /// W state mixed with white noise, `kappa` in [0, 1] is the noise weight.
    W,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Werner,
        Family::SigmaB,
        Family::RhoAlpha,
        Family::SigmaA,
        Family::Ghz,
        Family::W,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::Werner => "werner",
            Family::SigmaB => "sigma_b",
            Family::RhoAlpha => "rho_alpha",
            Family::SigmaA => "sigma_a",
            Family::Ghz => "ghz",
            Family::W => "w",
        }
    }

    /// (lower, upper, lower_open, upper_open)
    fn bounds(self) -> (f64, f64, bool, bool) {
        match self {
            Family::Werner | Family::Ghz | Family::W => (0.0, 1.0, false, false),
            Family::SigmaB | Family::SigmaA => (0.0, 1.0, true, true),
            Family::RhoAlpha => (2.0, 5.0, false, false),
        }
    }

    fn range_text(self) -> &'static str {
        match self {
            Family::Werner | Family::Ghz | Family::W => "[0, 1]",
            Family::SigmaB | Family::SigmaA => "(0, 1)",
            Family::RhoAlpha => "[2, 5]",
        }
    }

    pub fn contains(self, value: f64) -> bool {
        let (lo, hi, lo_open, hi_open) = self.bounds();
        let above = if lo_open { value > lo } else { value >= lo };
        let below = if hi_open { value < hi } else { value <= hi };
        value.is_finite() && above && below
    }

    /// Closed interval usable for scans: open ends are nudged inward.
    pub fn scan_bounds(self) -> (f64, f64) {
        let (lo, hi, lo_open, hi_open) = self.bounds();
        let eps = 1e-6;
        (if lo_open { lo + eps } else { lo }, if hi_open { hi - eps } else { hi })
    }

    pub fn dims(self) -> Vec<usize> {
        match self {
            Family::Werner => vec![2, 2],
            Family::SigmaB => vec![2, 4],
            Family::RhoAlpha | Family::SigmaA => vec![3, 3],
            Family::Ghz | Family::W => vec![2, 2, 2],
        }
    }

    pub fn check(self, value: f64) -> Result<()> {
        if self.contains(value) {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                family: self.id(),
                value,
                range: self.range_text(),
            })
        }
    }

    pub fn generate(self, value: f64) -> Result<DensityMatrix> {
        match self {
            Family::Werner => werner(value),
            Family::SigmaB => sigma_b(value),
            Family::RhoAlpha => rho_alpha(value),
            Family::SigmaA => sigma_a(value),
            Family::Ghz => ghz_noise(value),
            Family::W => w_noise(value),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown state family '{s}'")))
    }
}

/// A family together with a parameter inside its range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParam {
    family: Family,
    value: f64,
}

impl FamilyParam {
    pub fn new(family: Family, value: f64) -> Result<Self> {
        family.check(value)?;
        Ok(Self { family, value })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn generate(&self) -> DensityMatrix {
        self.family
            .generate(self.value)
            .expect("parameter validated on construction")
    }
}

/// `w |phi><phi| + (1 - w)/4 I` with `phi = (|00> + |11>)/sqrt2`.
pub fn werner(w: f64) -> Result<DensityMatrix> {
    Family::Werner.check(w)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let phi = [re(h), re(0.0), re(0.0), re(h)];
    let m = &ComplexMatrix::projector(&phi).scale(w) + &ComplexMatrix::identity(4).scale((1.0 - w) / 4.0);
    DensityMatrix::new(m, vec![2, 2])
}

/// The 2x4 bound entangled family (unnormalized bracket divided by `7b + 1`).
pub fn sigma_b(b: f64) -> Result<DensityMatrix> {
    Family::SigmaB.check(b)?;
    DensityMatrix::new(sigma_b_bracket(b).scale(1.0 / (7.0 * b + 1.0)), vec![2, 4])
}

/// Bracketed 8x8 matrix of the `sigma_b` family before normalization.
pub fn sigma_b_bracket(b: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(8, 8);
    for i in [0, 1, 2, 3, 5, 6] {
        m[(i, i)] = re(b);
    }
    let diag = (1.0 + b) / 2.0;
    let off = (1.0 - b * b).sqrt() / 2.0;
    m[(4, 4)] = re(diag);
    m[(7, 7)] = re(diag);
    m[(4, 7)] = re(off);
    m[(7, 4)] = re(off);
    for i in 0..3 {
        m[(i, i + 5)] = re(b);
        m[(i + 5, i)] = re(b);
    }
    m
}

/// `2/7 |Psi><Psi| + alpha/7 sigma_+ + (5 - alpha)/7 sigma_-`.
pub fn rho_alpha(alpha: f64) -> Result<DensityMatrix> {
    Family::RhoAlpha.check(alpha)?;
    let s = 1.0 / 3f64.sqrt();
    let psi: Vec<Complex64> = (0..9).map(|k| if k % 4 == 0 { re(s) } else { re(0.0) }).collect();
    let mut m = ComplexMatrix::projector(&psi).scale(2.0 / 7.0);
    // sigma_+ on |12>, |23>, |31>; sigma_- on |21>, |32>, |13>
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        m[(3 * i + j, 3 * i + j)] += alpha / 21.0;
    }
    for (i, j) in [(1, 0), (2, 1), (0, 2)] {
        m[(3 * i + j, 3 * i + j)] += (5.0 - alpha) / 21.0;
    }
    DensityMatrix::new(m, vec![3, 3])
}

/// The 3x3 bound entangled family (unnormalized bracket divided by `8a + 1`).
pub fn sigma_a(a: f64) -> Result<DensityMatrix> {
    Family::SigmaA.check(a)?;
    DensityMatrix::new(sigma_a_bracket(a).scale(1.0 / (8.0 * a + 1.0)), vec![3, 3])
}

/// Bracketed 9x9 matrix of the `sigma_a` family before normalization.
pub fn sigma_a_bracket(a: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::diag_real(&[a; 9]);
    for i in [0, 4, 8] {
        for j in [0, 4, 8] {
            m[(i, j)] = re(a);
        }
    }
    m[(6, 6)] = re((1.0 + a) / 2.0);
    m[(8, 8)] = re((1.0 + a) / 2.0);
    let off = (1.0 - a * a).sqrt() / 2.0;
    m[(6, 8)] = re(off);
    m[(8, 6)] = re(off);
    m
}

/// The five product vectors of the Tiles unextendible product basis.
pub fn tiles_vectors() -> [Vec<Complex64>; 5] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let e = |i| basis(3, i);
    let diff = |i: usize, j: usize| -> Vec<Complex64> {
        (0..3)
            .map(|k| {
                if k == i {
                    re(h)
                } else if k == j {
                    re(-h)
                } else {
                    re(0.0)
                }
            })
            .collect()
    };
    let s = 1.0 / 3f64.sqrt();
    let uniform = vec![re(s); 3];
    [
        kron_vec(&e(0), &diff(0, 1)),
        kron_vec(&diff(0, 1), &e(2)),
        kron_vec(&e(2), &diff(1, 2)),
        kron_vec(&diff(1, 2), &e(0)),
        kron_vec(&uniform, &uniform),
    ]
}

/// `(I - sum_x |psi_x><psi_x|) / 4` for the Tiles UPB.
pub fn upb_tiles() -> DensityMatrix {
    let mut m = ComplexMatrix::identity(9);
    for v in tiles_vectors() {
        m = &m - &ComplexMatrix::projector(&v);
    }
    DensityMatrix::new(m.scale(0.25), vec![3, 3]).expect("Tiles complement is a state")
}

/// `gamma I/8 + (1 - gamma) |GHZ><GHZ|`.
pub fn ghz_noise(gamma: f64) -> Result<DensityMatrix> {
    Family::Ghz.check(gamma)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut ghz = vec![re(0.0); 8];
    ghz[0] = re(h);
    ghz[7] = re(h);
    noisy(&ghz, gamma)
}

/// `kappa I/8 + (1 - kappa) |W><W|` with `W = (|001> + |010> + |100>)/sqrt3`.
pub fn w_noise(kappa: f64) -> Result<DensityMatrix> {
    Family::W.check(kappa)?;
    let s = 1.0 / 3f64.sqrt();
    let mut w = vec![re(0.0); 8];
    for k in [1, 2, 4] {
        w[k] = re(s);
    }
    noisy(&w, kappa)
}

fn noisy(psi: &[Complex64], noise: f64) -> Result<DensityMatrix> {
    let m = &ComplexMatrix::identity(8).scale(noise / 8.0) + &ComplexMatrix::projector(psi).scale(1.0 - noise);
    DensityMatrix::new(m, vec![2, 2, 2])
}

/// Haar-random unit vector: `d` complex normals (real then imaginary part
/// per entry), normalized.
pub fn haar_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d)
        .map(|_| {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            Complex64::new(a, b)
        })
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Convex mixture of `terms` random pure product states.
///
/// Draw order: all weights first (`terms` unit exponentials), then for each
/// term one Haar-random vector per party, left to right.
pub fn random_separable(dims: &[usize], terms: usize, seed: u64) -> Result<DensityMatrix> {
    if terms == 0 {
        return Err(Error::DomainError("random_separable needs at least one term".into()));
    }
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!("invalid dims {dims:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..terms).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let d: usize = dims.iter().product();
    let mut m = ComplexMatrix::zeros(d, d);
    for w in raw {
        let mut product = ComplexMatrix::identity(1);
        for &dim in dims {
            let psi = haar_pure_state(dim, &mut rng);
            product = kron(&product, &ComplexMatrix::projector(&psi));
        }
        m = &m + &product.scale(w / total);
    }
    DensityMatrix::new(m.hermitian_part(), dims.to_vec())
}

/// `G G^dagger / Tr(G G^dagger)` for a complex Ginibre matrix `G`
/// (row-major, real then imaginary part per entry).
pub fn random_density(dims: &[usize], seed: u64) -> Result<DensityMatrix> {
    let d: usize = dims.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_ginibre(d, &mut rng);
    let gg = (&g * &g.adjoint()).hermitian_part();
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale(1.0 / tr).hermitian_part(), dims.to_vec())
}

pub fn random_ginibre<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        Complex64::new(a, b)
    })
}

/// `(G + G^dagger)/2` for a complex Ginibre matrix `G`.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    random_ginibre(d, rng).hermitian_part()
}

/// State identifiers accepted on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StateId {
    Family(Family, f64),
    UpbTiles,
    Separable { dims: Vec<usize>, terms: usize, seed: u64 },
    File(PathBuf),
}

impl StateId {
    pub fn generate(&self) -> Result<DensityMatrix> {
        match self {
            StateId::Family(f, v) => f.generate(*v),
            StateId::UpbTiles => Ok(upb_tiles()),
            StateId::Separable { dims, terms, seed } => random_separable(dims, *terms, *seed),
            StateId::File(path) => read_matrix_file(path),
        }
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateId::Family(fam, v) => write!(f, "{fam}:{v}"),
            StateId::UpbTiles => f.write_str("upb_tiles"),
            StateId::Separable { dims, terms, seed } => {
                let dims: Vec<String> = dims.iter().map(ToString::to_string).collect();
                write!(f, "sep:{}:{terms}:{seed}", dims.join("x"))
            }
            StateId::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for StateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "upb_tiles" {
            return Ok(StateId::UpbTiles);
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(StateId::File(PathBuf::from(path)));
        }
        let bad = || Error::Parse(format!("invalid state id '{s}'"));
        if let Some(rest) = s.strip_prefix("sep:") {
            let parts: Vec<&str> = rest.split(':').collect();
            let [dims, terms, seed] = parts.as_slice() else {
                return Err(bad());
            };
            let dims = dims
                .split(['x', ','])
                .map(|d| d.parse::<usize>().ok().filter(|&d| d >= 1))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(bad)?;
            let terms = terms.parse::<usize>().ok().filter(|&t| t >= 1).ok_or_else(bad)?;
            let seed = seed.parse::<u64>().map_err(|_| bad())?;
            return Ok(StateId::Separable { dims, terms, seed });
        }
        let (name, value) = s.split_once(':').ok_or_else(bad)?;
        let family: Family = name.parse()?;
        let value: f64 = value.parse().map_err(|_| bad())?;
        family.check(value)?;
        Ok(StateId::Family(family, value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn min_pt_eig(rho: &DensityMatrix, party: usize) -> f64 {
        crate::linalg::hermitian_eigenvalues(&rho.partial_transpose(party).unwrap())
            .unwrap()
            .min()
    }

    #[test]
    fn werner_endpoints() {
        assert_eq!(werner(0.0).unwrap(), DensityMatrix::maximally_mixed(vec![2, 2]));
        let bell = werner(1.0).unwrap();
        assert_abs_diff_eq!(bell.purity(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(bell.matrix()[(0, 3)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(min_pt_eig(&werner(1.0 / 3.0).unwrap(), 1), 0.0, epsilon = 1e-12);
        assert!(matches!(werner(1.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn sigma_b_closed_form_entries() {
        let m = sigma_b_bracket(0.6);
        assert_abs_diff_eq!(m[(4, 7)].re, 0.4, epsilon = 1e-15);
        let near_one = sigma_b_bracket(1.0 - 1e-12);
        assert_abs_diff_eq!(near_one[(4, 4)].re, 1.0, epsilon = 1e-11);
        assert!(near_one[(4, 7)].re < 1e-5);
        assert!(sigma_b(0.0).is_err());
        assert!(sigma_b(1.0).is_err());
        for b in [0.05, 0.3, 0.7, 0.95] {
            let rho = sigma_b(b).unwrap();
            assert!(min_pt_eig(&rho, 0) >= -1e-10);
            assert!(min_pt_eig(&rho, 1) >= -1e-10);
        }
    }

    #[test]
    fn sigma_a_closed_form_entries() {
        let m = sigma_a_bracket(0.8);
        assert_abs_diff_eq!(m[(6, 8)].re, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(m.trace().re, 8.0 * 0.8 + 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sigma_a(0.8).unwrap().matrix().trace().re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rho_alpha_npt_boundary() {
        assert_abs_diff_eq!(min_pt_eig(&rho_alpha(4.0).unwrap(), 1), 0.0, epsilon = 1e-9);
        assert!(min_pt_eig(&rho_alpha(5.0).unwrap(), 1) < -1e-3);
        assert!(min_pt_eig(&rho_alpha(3.5).unwrap(), 1) > 0.0);
        assert!(rho_alpha(1.9).is_err());
    }

    #[test]
    fn upb_tiles_properties() {
        let rho = upb_tiles();
        assert_abs_diff_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.purity(), 0.25, epsilon = 1e-14);
        for v in tiles_vectors() {
            let out = rho.matrix().mul_vec(&v).unwrap();
            assert!(out.iter().all(|z| z.norm() < 1e-15));
        }
        assert!(min_pt_eig(&rho, 0) >= -1e-10);
        assert!(min_pt_eig(&rho, 1) >= -1e-10);
    }

    #[test]
    fn ghz_and_w_noise() {
        assert_eq!(ghz_noise(1.0).unwrap(), DensityMatrix::maximally_mixed(vec![2, 2, 2]));
        let ghz = ghz_noise(0.0).unwrap();
        for party in 0..3 {
            assert_abs_diff_eq!(min_pt_eig(&ghz, party), -0.5, epsilon = 1e-12);
        }
        let reduced = ghz.partial_trace(2).unwrap();
        assert!(reduced.approx_eq(&ComplexMatrix::identity(2).scale(0.5), 1e-15));
        let w = w_noise(0.0).unwrap();
        assert_abs_diff_eq!(w.purity(), 1.0, epsilon = 1e-12);
        assert!(w_noise(-0.1).is_err());
    }

    #[test]
    fn random_separable_is_deterministic_and_ppt() {
        let a = random_separable(&[2, 3], 4, 11).unwrap();
        let b = random_separable(&[2, 3], 4, 11).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_separable(&[2, 3], 4, 12).unwrap());
        let pure = random_separable(&[3, 3], 1, 5).unwrap();
        assert_abs_diff_eq!(pure.purity(), 1.0, epsilon = 1e-12);
        assert!(min_pt_eig(&pure, 1) >= -1e-10);
        assert!(random_separable(&[2, 2], 0, 1).is_err());
    }

    #[test]
    fn state_ids() {
        for s in [
            "werner:0.5",
            "sigma_b:0.25",
            "rho_alpha:3.5",
            "sigma_a:0.1",
            "ghz:0",
            "w:1",
            "upb_tiles",
            "sep:2x4:3:42",
        ] {
            let id: StateId = s.parse().unwrap();
            assert_eq!(id.to_string(), s);
            id.generate().unwrap();
        }
        assert_eq!(
            "sep:2,2:1:0".parse::<StateId>().unwrap(),
            StateId::Separable {
                dims: vec![2, 2],
                terms: 1,
                seed: 0
            }
        );
        for bad in ["werner", "werner:x", "werner:2", "tiles", "sep:2x2:0:1", "sep:2x2:1"] {
            assert!(bad.parse::<StateId>().is_err(), "{bad}");
        }
    }
}
