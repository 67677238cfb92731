use thiserror::Error;

use crate::rational::{format_rational, Rational};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for {len} coordinates")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty sample")]
    EmptySamples,
    #[error("non-finite value {0}")]
    NonFinite(f64),
    #[error("common grid needs {n} atoms, above the cap of {cap}; quantize probabilities first")]
    RefinementTooLarge { n: String, cap: usize },
    #[error("majorization violated at prefix {index}")]
    MajorizationViolated { index: usize },
    #[error("means differ: {} vs {}", format_rational(.xi), format_rational(.eta))]
    MeansDiffer { xi: Rational, eta: Rational },
    #[error("ssd violated at alpha={} (gap {})", format_rational(.alpha), format_rational(.gap))]
    SsdViolated { alpha: Rational, gap: Rational },
    #[error("no perfect matching on the support; matrix is not doubly stochastic")]
    NoPerfectMatching,
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("parse error: {0}")]
    Parse(String),
}
