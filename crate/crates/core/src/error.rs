use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid hook parameters M={m}, N={n}, j={j}")]
    InvalidHook { m: u64, n: usize, j: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NonHermitianInput { deviation: f64 },

    #[error("matrix entry ({row}, {col}) has modulus {modulus} > radius {radius}")]
    RadiusExceeded {
        row: usize,
        col: usize,
        modulus: f64,
        radius: f64,
    },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("duplicate exponent {0}")]
    DuplicateExponent(u64),

    #[error("numerical rank exceeds one (second eigenvalue {second:e})")]
    RankExceedsOne { second: f64 },

    #[error("coefficient vector must be non-empty with strictly positive entries")]
    InvalidCoefficients,

    #[error("tail degree {degree} is below the dimension {dim}")]
    TailBelowN { degree: u64, dim: usize },

    #[error("exponents must satisfy m < n < p (got {m}, {n}, {p})")]
    BadExponentOrder { m: u64, n: u64, p: u64 },

    #[error("kernel of the first matrix is not contained in the kernel of the second (residual {residual:e})")]
    KernelNotContained { residual: f64 },

    #[error("matrix is zero")]
    ZeroMatrix,

    #[error("vector is zero")]
    ZeroVector,

    #[error("witness parameter t = {0} lies outside (0, 1/N)")]
    TOutOfRange(String),

    #[error("weight matrix has a zero diagonal entry at index {0}")]
    ZeroDiagonal(usize),

    #[error("kernel computations disagree: {0}")]
    StructureMismatch(String),

    #[error("entry ({row}, {col}) has modulus {modulus}, expected 0 or 1")]
    BadModulus { row: usize, col: usize, modulus: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
