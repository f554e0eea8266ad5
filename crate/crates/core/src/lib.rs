//! Entanglement detection from moments of positive maps.
//!
//! A positive but not completely positive map `L` applied to one party of a
//! separable state always yields a positive semidefinite matrix, so the
//! Hankel matrices built from the traces of its powers are positive too.
//! Negativity of those Hankel matrices (or of the derived scalar criteria)
//! certifies entanglement. This crate provides the maps, the moment and
//! Hankel machinery, the state families used to exercise them, and
//! spectral oracles that cross-check every verdict.

pub mod error;
pub mod linalg;
pub mod tolerance;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, Spectrum};
pub mod acceptance;
pub mod evaluate;
pub mod maps;
pub mod moments;
pub mod oracles;
pub mod states;
