//! Default numerical tolerances.
//!
//! Every threshold used by the library lives here so that tests and the
//! consistency report pin the same values.

/// Max entrywise |M - M^dagger| accepted for a density matrix.
pub const HERMITIAN: f64 = 1e-12;

/// Max |Tr(rho) - 1| accepted for a density matrix.
pub const UNIT_TRACE: f64 = 1e-12;

/// Most negative eigenvalue accepted for a density matrix, and the
/// threshold below which a spectrum counts as negative (NPT, non-PSD).
pub const PSD: f64 = 1e-10;

/// Max |M - M^dagger| accepted as input to the Hermitian eigensolver.
pub const EIGEN_INPUT_HERMITIAN: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-13;

/// Sweep budget for the Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Largest imaginary part tolerated in the trace of a power of a Hermitian matrix.
pub const REAL_TRACE: f64 = 1e-10;

/// Smallest |trace| that may be normalized away.
pub const ZERO_TRACE: f64 = 1e-12;

/// A criterion detects only when its witness is below `-DETECTION`.
pub const DETECTION: f64 = 1e-10;

/// Distance from an integer at which `1/p2` is snapped before flooring.
pub const FLOOR_SNAP: f64 = 1e-12;

/// Negative square-root arguments within this bound are clamped to zero.
pub const SQRT_CLAMP: f64 = 1e-12;

/// |m_1 - 1| allowed for a sequence flagged as normalized.
pub const NORMALIZED_FIRST_MOMENT: f64 = 1e-12;

/// Hankel negativity below this with a PSD mapped spectrum is an internal error.
pub const CONSISTENCY: f64 = 1e-8;

/// Worst witness allowed over random separable states.
pub const SEPARABLE_WITNESS: f64 = 1e-9;
