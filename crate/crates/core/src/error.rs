use thiserror::Error;

use crate::svd::ComplexSvd;

/// Message reported when a homology request is incompatible with the
/// dimensions of a complex.
pub const RANK_CONDITIONS_MESSAGE: &str = "The rank conditions cannot be satisfied.";

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix entry at ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {actual}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("differential {index}: {detail}")]
    Structural { index: usize, detail: String },

    #[error("numerical routine failed to converge: {0}")]
    NumericalFailure(String),

    #[error("{modulus} is not a prime")]
    NotPrime { modulus: u64 },

    #[error("rank data inconsistent with dimensions: {0}")]
    Inconsistent(String),

    #[error("{}", RANK_CONDITIONS_MESSAGE)]
    RankConditions,

    #[error("rank decisions give negative homology at position {position}; singular values per level: {singular_values:?}")]
    RankDecisionFailure {
        position: usize,
        singular_values: Vec<Vec<f64>>,
    },

    #[error("Laplacian {index} has a repeated non-zero eigenvalue: {values:?}")]
    RepeatedEigenvalue { index: usize, values: Vec<f64> },

    #[error("conjugated differential {index} is not diagonal (off-diagonal mass {mass:e})")]
    DiagonalityFailure { index: usize, mass: f64 },

    #[error("column sign flips cannot make every basis special orthogonal")]
    InsufficientSignFreedom(Box<ComplexSvd>),

    #[error("rank {rank} is ill-conditioned: sigma_r = {sigma_r:e}, sigma_1 = {sigma_1:e}")]
    IllConditionedRank { rank: usize, sigma_r: f64, sigma_1: f64 },

    #[error("pseudoinverse over F_{modulus} undefined: {condition}")]
    PenroseCondition {
        modulus: u64,
        condition: PenroseConditionKind,
    },

    #[error("operation requires a {expected} complex, got {actual}")]
    WrongDomain {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("complex is not exact: {nonzero} non-zero entries in compositions")]
    NotAComplex { nonzero: usize },

    #[error("generator: {0}")]
    Generator(String),

    #[error("document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenroseConditionKind {
    /// `ker A ∩ (ker A)^⊥ ≠ 0`
    KernelDegenerate,
    /// `im A ∩ (im A)^⊥ ≠ 0`
    ImageDegenerate,
}

impl std::fmt::Display for PenroseConditionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PenroseConditionKind::KernelDegenerate => {
                f.write_str("kernel meets its orthogonal complement")
            }
            PenroseConditionKind::ImageDegenerate => {
                f.write_str("image meets its orthogonal complement")
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
