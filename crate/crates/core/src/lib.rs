//! Entrywise positivity preservers in fixed dimension.
//!
//! This crate computes the sharp coefficient threshold below which the
//! entrywise polynomial `c_0 + c_1 z + ... + c_{N-1} z^{N-1} + c' z^M`
//! stops preserving positive semidefiniteness on `N x N` matrices with
//! entries in a closed disc, together with the machinery around it:
//!
//! * [`schur`]: exact Schur polynomials, hook partitions, elementary
//!   symmetric polynomials and Vandermonde determinants.
//! * [`matrix`]: dense Hermitian matrices, Hadamard powers, PSD verdicts,
//!   pseudoinverses, kernels and rank-one factors, plus an exact rational
//!   mode and the JSON/CSV matrix file formats.
//! * [`threshold`]: closed-form threshold constants, analytic-series and
//!   matrix-cube bounds, and the `2 x 2` three-term threshold.
//! * [`pencil`]: extreme critical values of single-matrix pencils and the
//!   rank-one witness family.
//! * [`strata`]: rank-one block decompositions, strata dimensions and
//!   simultaneous kernels of Hadamard powers.
//! * [`oracle`]: exact brute-force verification of the determinantal
//!   identities and an empirical search for negativity witnesses.
//!
//! Everything that can be exact is exact: thresholds and identities use
//! arbitrary-precision rationals, floats are used only for spectral work.

pub mod error;
pub mod matrix;
pub mod oracle;
pub mod pencil;
pub mod rational;
pub mod schur;
pub mod strata;
pub mod threshold;

pub use error::{Error, Result};
pub use matrix::{HermMatrix, KernelBasis, PsdVerdict, RatMatrix};
pub use num_complex::Complex64;
pub use rational::Rational;
pub use schur::Partition;
pub use strata::{BlockDecomposition, GroupTag, IndexPartition};
pub use threshold::{CoeffVector, ThresholdQuery, ThresholdValue};
