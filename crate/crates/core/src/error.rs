use thiserror::Error;

use crate::exact::BivarPoly;

/// Error type shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed caller input: dimension mismatches, non-finite entries,
    /// out-of-range configuration values, unparseable files.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Input is structurally fine but outside the mathematical domain of the
    /// operation (point on the unit circle, spectral radius at or above one,
    /// division by zero in an exact field, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix that must be positive semidefinite is not; carries the
    /// offending smallest eigenvalue as a witness.
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.6e})")]
    NotPsd { min_eig: f64 },

    /// A matrix inverse was refused because the condition estimate exceeds
    /// the crate-wide ceiling.
    #[error("matrix is singular or near-singular (condition estimate {cond:.3e})")]
    Singular { cond: f64 },

    /// A solve or an iterative closure did not reach the required accuracy.
    #[error("conditioning failure: {0}")]
    IllConditioned(String),

    /// Exact polynomial division left a nonzero remainder; the remainder is
    /// returned as the witness of non-divisibility.
    #[error("polynomial division left a nonzero remainder")]
    NotDivisible { remainder: Box<BivarPoly> },

    /// The quadratic for the middle Blaschke zero has no real root inside
    /// the open interval (-1, 1).
    #[error("no admissible middle zero in (-1, 1)")]
    NoAdmissibleOmega,
}

pub type Result<T> = std::result::Result<T, Error>;
