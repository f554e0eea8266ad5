//! Positive maps in signed-Kraus form, `L(X) = sum_i s_i K_i X K_i^dagger`.
//!
//! Every map is stored as its explicit term list. A map built here is not
//! assumed to be positive: [`SignedKrausMap::sample_positivity`] checks it
//! on random pure states and callers carry that flag alongside verdicts.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_layout, hermitian_eigenvalues, kron, ComplexMatrix, DensityMatrix, Split};
use crate::states::haar_pure_state;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausTerm {
    pub operator: ComplexMatrix,
    pub sign: Sign,
}

/// Summation convention for the F/G terms of the elementary-operator
/// reduction map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// E over ordered pairs `i != j`, F and G over unordered pairs `i < j`.
    /// Equals the reduction map `Tr(X) I - X`.
    #[serde(rename = "unordered")]
    UnorderedGF,
    /// All three sums over ordered pairs `i != j`.
    /// Equals `Tr(X) I + diag(X) - 2X`, which is not a positive map.
    #[serde(rename = "ordered")]
    OrderedGF,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::UnorderedGF => "unordered",
            Convention::OrderedGF => "ordered",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unordered" => Ok(Convention::UnorderedGF),
            "ordered" => Ok(Convention::OrderedGF),
            other => Err(Error::Parse(format!("unknown convention '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignedKrausMap {
    name: String,
    in_dim: usize,
    out_dim: usize,
    terms: Vec<KrausTerm>,
    convention: Option<Convention>,
}

/// Outcome of the sampled positivity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub samples: usize,
    /// Smallest eigenvalue of `L(|psi><psi|)` over all samples.
    pub min_eigenvalue: f64,
    pub positive: bool,
}

impl SignedKrausMap {
    pub fn new(name: impl Into<String>, in_dim: usize, out_dim: usize, terms: Vec<KrausTerm>) -> Result<Self> {
        for t in &terms {
            if t.operator.rows() != out_dim || t.operator.cols() != in_dim {
                return Err(Error::Shape {
                    expected: format!("{out_dim}x{in_dim} Kraus operator"),
                    got: format!("{}x{}", t.operator.rows(), t.operator.cols()),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            in_dim,
            out_dim,
            terms,
            convention: None,
        })
    }

    fn with_convention(mut self, c: Convention) -> Self {
        self.convention = Some(c);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn terms(&self) -> &[KrausTerm] {
        &self.terms
    }

    pub fn convention(&self) -> Option<Convention> {
        self.convention
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.in_dim || x.cols() != self.in_dim {
            return Err(Error::DimensionMismatch(format!(
                "map {} expects {}x{} input, got {}x{}",
                self.name,
                self.in_dim,
                self.in_dim,
                x.rows(),
                x.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for t in &self.terms {
            let kx = t.operator.matmul(x)?;
            let term = kx.matmul(&t.operator.adjoint())?;
            out = match t.sign {
                Sign::Plus => &out + &term,
                Sign::Minus => &out - &term,
            };
        }
        Ok(out)
    }

    /// Applies the map to factor `party` of `m` and the identity elsewhere.
    pub fn apply_partial_matrix(&self, m: &ComplexMatrix, dims: &[usize], party: usize) -> Result<ComplexMatrix> {
        check_layout(m, dims, party)?;
        if self.in_dim != self.out_dim || self.in_dim != dims[party] {
            return Err(Error::DimensionMismatch(format!(
                "map {} ({} -> {}) cannot act on a subsystem of dimension {}",
                self.name, self.in_dim, self.out_dim, dims[party]
            )));
        }
        let split = Split::new(dims, party);
        let d = split.local;
        let n = m.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        let mut block = ComplexMatrix::zeros(d, d);
        for l1 in 0..split.left {
            for r1 in 0..split.right {
                for l2 in 0..split.left {
                    for r2 in 0..split.right {
                        for s1 in 0..d {
                            for s2 in 0..d {
                                block[(s1, s2)] = m[(split.compose(l1, s1, r1), split.compose(l2, s2, r2))];
                            }
                        }
                        let mapped = self.apply(&block)?;
                        for s1 in 0..d {
                            for s2 in 0..d {
                                out[(split.compose(l1, s1, r1), split.compose(l2, s2, r2))] = mapped[(s1, s2)];
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Choi matrix `sum_ij E_ij ⊗ L(E_ij)`.
    pub fn choi_matrix(&self) -> Result<ComplexMatrix> {
        let d = self.in_dim;
        let mut acc = ComplexMatrix::zeros(d * self.out_dim, d * self.out_dim);
        for i in 0..d {
            for j in 0..d {
                let e = ComplexMatrix::unit(d, i, j);
                acc = &acc + &kron(&e, &self.apply(&e)?);
            }
        }
        Ok(acc)
    }

    /// Applies the map to `samples` Haar-random pure states and records the
    /// most negative output eigenvalue.
    pub fn sample_positivity(&self, samples: usize, seed: u64, tol: f64) -> Result<PositivityReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = f64::INFINITY;
        for _ in 0..samples {
            let psi = haar_pure_state(self.in_dim, &mut rng);
            let out = self.apply(&ComplexMatrix::projector(&psi))?;
            worst = worst.min(hermitian_eigenvalues(&out.hermitian_part())?.min());
        }
        Ok(PositivityReport {
            samples,
            min_eigenvalue: worst,
            positive: worst >= -tol,
        })
    }
}

/// Applies `map` to subsystem `party` of `rho`.
pub fn apply_partial(map: &SignedKrausMap, rho: &DensityMatrix, party: usize) -> Result<ComplexMatrix> {
    map.apply_partial_matrix(rho.matrix(), rho.dims(), party)
}

fn unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
    ComplexMatrix::unit(d, i, j)
}

fn plus(operator: ComplexMatrix) -> KrausTerm {
    KrausTerm {
        operator,
        sign: Sign::Plus,
    }
}

fn minus(operator: ComplexMatrix) -> KrausTerm {
    KrausTerm {
        operator,
        sign: Sign::Minus,
    }
}

/// Transposition in the computational basis.
///
/// `X^T = sum_i E_ii X E_ii + sum_{i<j} (S_ij X S_ij - A_ij X A_ij^dagger)`
/// with `S_ij = (E_ij + E_ji)/sqrt2` and `A_ij = (E_ij - E_ji)/sqrt2`.
pub fn transpose_map(d: usize) -> SignedKrausMap {
    assert!(d >= 2, "transpose map needs d >= 2");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut terms: Vec<KrausTerm> = (0..d).map(|i| plus(unit(d, i, i))).collect();
    for i in 0..d {
        for j in i + 1..d {
            terms.push(plus((&unit(d, i, j) + &unit(d, j, i)).scale(h)));
            terms.push(minus((&unit(d, i, j) - &unit(d, j, i)).scale(h)));
        }
    }
    SignedKrausMap::new(format!("transpose:{d}"), d, d, terms).expect("square operators")
}

/// Qubit map `[[a11, a12], [a21, a22]] -> [[a22, -a12], [-a21, a11]]`.
pub fn lambda1() -> SignedKrausMap {
    let terms = vec![
        plus(unit(2, 0, 0)),
        plus(unit(2, 1, 1)),
        plus(unit(2, 0, 1)),
        plus(unit(2, 1, 0)),
        minus(&unit(2, 0, 0) + &unit(2, 1, 1)),
    ];
    SignedKrausMap::new("lambda1", 2, 2, terms).expect("2x2 operators")
}

/// Qubit map `[[a11, a12], [a21, a22]] -> [[3 a11 + a22, a12], [a21, a11]]`.
pub fn lambda2() -> SignedKrausMap {
    let terms = vec![
        plus(&unit(2, 0, 0).scale(2.0) + &unit(2, 1, 1)),
        plus(unit(2, 0, 1)),
        plus(unit(2, 1, 0)),
        minus(&unit(2, 0, 0) + &unit(2, 1, 1)),
    ];
    SignedKrausMap::new("lambda2", 2, 2, terms).expect("2x2 operators")
}

/// Reduction map `X -> Tr(X) I - X` as `sum_ij E_ij X E_ij^dagger - X`.
pub fn reduction_map(d: usize) -> SignedKrausMap {
    assert!(d >= 2, "reduction map needs d >= 2");
    let mut terms = Vec::with_capacity(d * d + 1);
    for i in 0..d {
        for j in 0..d {
            terms.push(plus(unit(d, i, j)));
        }
    }
    terms.push(minus(ComplexMatrix::identity(d)));
    SignedKrausMap::new(format!("reduction:{d}"), d, d, terms).expect("square operators")
}

/// Elementary-operator form of the reduction map with
/// `F_ij = (E_ii + E_jj)/sqrt2` and `G_ij = (E_ii - E_jj)/sqrt2`.
///
/// The E terms always run over ordered pairs; `convention` selects the
/// range of the F/G sums.
pub fn hou_reduction_map(d: usize, convention: Convention) -> SignedKrausMap {
    assert!(d >= 2, "reduction map needs d >= 2");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut terms = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                terms.push(plus(unit(d, i, j)));
            }
        }
    }
    let pairs: Vec<(usize, usize)> = match convention {
        Convention::UnorderedGF => (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect(),
        Convention::OrderedGF => (0..d)
            .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect(),
    };
    for (i, j) in pairs {
        terms.push(plus((&unit(d, i, i) - &unit(d, j, j)).scale(h)));
        terms.push(minus((&unit(d, i, i) + &unit(d, j, j)).scale(h)));
    }
    SignedKrausMap::new(format!("hou:{d}:{convention}"), d, d, terms)
        .expect("square operators")
        .with_convention(convention)
}

/// Qutrit Choi-type map with diagonal `(a11 + a22, a22 + a33, a33 + a11)`
/// and negated off-diagonal entries.
pub fn phi1() -> SignedKrausMap {
    let mut terms = Vec::new();
    for i in 0..3 {
        // weight 2 on each E_ii term
        terms.push(plus(unit(3, i, i)));
        terms.push(plus(unit(3, i, i)));
    }
    terms.push(plus(unit(3, 0, 1)));
    terms.push(plus(unit(3, 1, 2)));
    terms.push(plus(unit(3, 2, 0)));
    terms.push(minus(ComplexMatrix::identity(3)));
    SignedKrausMap::new("phi1", 3, 3, terms).expect("3x3 operators")
}

/// Map identifiers accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapId {
    /// Transposition; the dimension defaults to the target subsystem.
    Transpose(Option<usize>),
    Lambda1,
    Lambda2,
    Phi1,
    Reduction(usize),
    Hou(usize, Convention),
}

impl MapId {
    /// Builds the map for a subsystem of dimension `party_dim`.
    pub fn build(&self, party_dim: usize) -> Result<SignedKrausMap> {
        let check = |d: usize| {
            if d < 2 {
                Err(Error::DomainError(format!("map dimension {d} must be at least 2")))
            } else {
                Ok(d)
            }
        };
        let map = match *self {
            MapId::Transpose(d) => transpose_map(check(d.unwrap_or(party_dim))?),
            MapId::Lambda1 => lambda1(),
            MapId::Lambda2 => lambda2(),
            MapId::Phi1 => phi1(),
            MapId::Reduction(d) => reduction_map(check(d)?),
            MapId::Hou(d, c) => hou_reduction_map(check(d)?, c),
        };
        if map.in_dim() != party_dim {
            return Err(Error::DimensionMismatch(format!(
                "map {} acts on dimension {}, subsystem has dimension {party_dim}",
                map.name(),
                map.in_dim()
            )));
        }
        Ok(map)
    }

    pub fn is_transpose(&self) -> bool {
        matches!(self, MapId::Transpose(_))
    }

    pub fn convention(&self) -> Option<Convention> {
        match self {
            MapId::Hou(_, c) => Some(*c),
            _ => None,
        }
    }
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapId::Transpose(None) => f.write_str("transpose"),
            MapId::Transpose(Some(d)) => write!(f, "transpose:{d}"),
            MapId::Lambda1 => f.write_str("lambda1"),
            MapId::Lambda2 => f.write_str("lambda2"),
            MapId::Phi1 => f.write_str("phi1"),
            MapId::Reduction(d) => write!(f, "reduction:{d}"),
            MapId::Hou(d, c) => write!(f, "hou:{d}:{c}"),
        }
    }
}

impl FromStr for MapId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let dim = |p: &str| -> Result<usize> {
            p.parse::<usize>()
                .ok()
                .filter(|&d| d >= 2)
                .ok_or_else(|| Error::Parse(format!("invalid map dimension '{p}' in '{s}'")))
        };
        match parts.as_slice() {
            ["transpose"] => Ok(MapId::Transpose(None)),
            ["transpose", d] => Ok(MapId::Transpose(Some(dim(d)?))),
            ["lambda1"] => Ok(MapId::Lambda1),
            ["lambda2"] => Ok(MapId::Lambda2),
            ["phi1"] => Ok(MapId::Phi1),
            ["reduction", d] => Ok(MapId::Reduction(dim(d)?)),
            ["hou", d, c] => Ok(MapId::Hou(dim(d)?, c.parse()?)),
            _ => Err(Error::Parse(format!("unknown map id '{s}'"))),
        }
    }
}
