//! Dense complex linear algebra for small quantum states.

mod density;
mod eigen;
mod matrix;
mod partial;

pub use density::{DensityMatrix, StateTolerance};
pub use eigen::{
    hermitian_eigenvalues, hermitian_eigenvalues_with, trace_power, trace_power_complex, JacobiOptions, Spectrum,
};
pub use matrix::{kron, kron_vec, ComplexMatrix};
pub(crate) use partial::{check_layout, Split};
pub use partial::{partial_trace_matrix, partial_transpose_matrix, permute_local_basis};

pub use num_complex::Complex64;

/// Partial transpose of `rho` on subsystem `party`.
pub fn partial_transpose(rho: &DensityMatrix, party: usize) -> crate::Result<ComplexMatrix> {
    rho.partial_transpose(party)
}

/// Reduced matrix of `rho` on subsystem `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: usize) -> crate::Result<ComplexMatrix> {
    rho.partial_trace(keep)
}
