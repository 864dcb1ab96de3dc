//! Error type shared by every module of the crate.
//!
//! Diagnostic payloads are carried as `f64` regardless of the scalar type
//! a computation ran in, so the enum stays free of type parameters.

use thiserror::Error;

/// Everything that can go wrong in constructors, closed forms and searches.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A matrix is not square, or its side is not a perfect square `d * d`.
    #[error("operator of size {rows}x{cols} is not d^2 x d^2 for any local dimension d >= 2")]
    NotTensorSquare { rows: usize, cols: usize },

    /// A matrix deviates from Hermitian symmetry beyond tolerance.
    #[error("matrix is not Hermitian: max |M - M^dag| = {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    /// An operator that must be positive semidefinite is not.
    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    /// An operator that must be a density matrix has the wrong trace.
    #[error("matrix is not normalized: trace = {trace:.6e}")]
    NotNormalized { trace: f64 },

    /// Two operators or states live on different local dimensions.
    #[error("local dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// `(f, fhat)` violates the positivity triangle for the given `d`.
    #[error("(f, fhat) = ({f:.9}, {fhat:.9}) lies outside the state triangle for d = {d}")]
    OutsideTriangle { d: usize, f: f64, fhat: f64 },

    /// The local dimension is below the smallest value an operation supports.
    #[error("local dimension d = {d} is not supported here (need d >= {min})")]
    DimensionTooSmall { d: usize, min: usize },

    /// A denominator vanished where a closed form needs to divide.
    #[error("singular input: {what} vanishes")]
    Singular { what: &'static str },

    /// A state lies outside the geometric region an operation requires.
    #[error("geometry: {0}")]
    Geometry(String),

    /// A scalar parameter is outside its admissible range.
    #[error("parameter {name} = {value:.9} is outside [{lo:.9}, {hi:.9}]")]
    ParameterRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// A rank request that the dimension cannot satisfy.
    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    /// An iterative search stopped without meeting its tolerance; the best
    /// point seen so far is reported for diagnosis.
    #[error(
        "search did not converge: best value {best_value:.12e} at \
         ({best_s:.9}, {best_shat:.9}) after {evaluations} evaluations"
    )]
    NoConvergence {
        best_value: f64,
        best_s: f64,
        best_shat: f64,
        evaluations: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
