//! Operations on a single tensor factor of a multipartite matrix.
//!
//! Subsystems are zero-indexed left to right; party 0 is the most
//! significant digit of the computational-basis index.

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Checks that `dims` factorizes `m` and that `party` is a valid index.
pub(crate) fn check_layout(m: &ComplexMatrix, dims: &[usize], party: usize) -> Result<()> {
    m.ensure_square()?;
    let total: usize = dims.iter().product();
    if dims.is_empty() || total != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} do not factor a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if party >= dims.len() {
        return Err(Error::BadParty {
            party,
            parties: dims.len(),
        });
    }
    Ok(())
}

/// Splits a flat index into (left, local, right) around `party`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Split {
    pub left: usize,
    pub local: usize,
    pub right: usize,
}

impl Split {
    pub fn new(dims: &[usize], party: usize) -> Self {
        Self {
            left: dims[..party].iter().product(),
            local: dims[party],
            right: dims[party + 1..].iter().product(),
        }
    }

    #[inline]
    pub fn decompose(&self, idx: usize) -> (usize, usize, usize) {
        let r = idx % self.right;
        let rest = idx / self.right;
        (rest / self.local, rest % self.local, r)
    }

    #[inline]
    pub fn compose(&self, l: usize, s: usize, r: usize) -> usize {
        (l * self.local + s) * self.right + r
    }
}

/// Transposes the tensor factor `party` of `m`.
pub fn partial_transpose_matrix(m: &ComplexMatrix, dims: &[usize], party: usize) -> Result<ComplexMatrix> {
    check_layout(m, dims, party)?;
    let split = Split::new(dims, party);
    let n = m.dim();
    Ok(ComplexMatrix::from_fn(n, n, |row, col| {
        let (l1, s1, r1) = split.decompose(row);
        let (l2, s2, r2) = split.decompose(col);
        m[(split.compose(l1, s2, r1), split.compose(l2, s1, r2))]
    }))
}

/// Reduced matrix on factor `keep`, tracing out every other subsystem.
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: &[usize], keep: usize) -> Result<ComplexMatrix> {
    check_layout(m, dims, keep)?;
    let split = Split::new(dims, keep);
    Ok(ComplexMatrix::from_fn(split.local, split.local, |i, j| {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for l in 0..split.left {
            for r in 0..split.right {
                acc += m[(split.compose(l, i, r), split.compose(l, j, r))];
            }
        }
        acc
    }))
}

/// Permutes the local basis of `party` by `perm` (basis vector `i` goes to `perm[i]`).
pub fn permute_local_basis(m: &ComplexMatrix, dims: &[usize], party: usize, perm: &[usize]) -> Result<ComplexMatrix> {
    check_layout(m, dims, party)?;
    if perm.len() != dims[party] {
        return Err(Error::DimensionMismatch(format!(
            "permutation of length {} for a factor of dimension {}",
            perm.len(),
            dims[party]
        )));
    }
    let split = Split::new(dims, party);
    let mut inverse = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inverse[p] = i;
    }
    let n = m.dim();
    Ok(ComplexMatrix::from_fn(n, n, |row, col| {
        let (l1, s1, r1) = split.decompose(row);
        let (l2, s2, r2) = split.decompose(col);
        m[(split.compose(l1, inverse[s1], r1), split.compose(l2, inverse[s2], r2))]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;

    #[test]
    fn bad_party_and_dims() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            partial_transpose_matrix(&m, &[2, 2], 2),
            Err(Error::BadParty { party: 2, parties: 2 })
        ));
        assert!(matches!(
            partial_trace_matrix(&m, &[2, 3], 0),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn trace_of_kron_keeps_scaled_factor() {
        let a = ComplexMatrix::from_real(2, 2, &[0.7, 0.2, 0.2, 0.3]).unwrap();
        let b = ComplexMatrix::from_real(3, 3, &[1.0, 0.5, 0.0, 0.5, 2.0, 0.1, 0.0, 0.1, 0.5]).unwrap();
        let m = kron(&a, &b);
        let reduced = partial_trace_matrix(&m, &[2, 3], 0).unwrap();
        assert!(reduced.approx_eq(&a.scale(3.5), 1e-12));
        let reduced_b = partial_trace_matrix(&m, &[2, 3], 1).unwrap();
        assert!(reduced_b.approx_eq(&b, 1e-12));
    }

    #[test]
    fn transpose_of_middle_factor() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let c = ComplexMatrix::identity(3);
        let m = kron(&kron(&a, &b), &c);
        let expected = kron(&kron(&a, &b.transpose()), &c);
        assert_eq!(partial_transpose_matrix(&m, &[2, 2, 3], 1).unwrap(), expected);
    }
}
