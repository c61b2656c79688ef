use crate::fock::Statistics;

/// Errors raised by domain constructors and operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("qudit dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("variable value {value} out of range for dimension {d}")]
    ValueOutOfRange { value: usize, d: usize },
    #[error("mode index {index} out of range for dimension {d} (expected < {})", 2 * d)]
    IndexOutOfRange { index: usize, d: usize },
    #[error("Bell label (c={c}, p={p}) out of range for dimension {d}")]
    LabelOutOfRange { c: usize, p: usize, d: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("exchange statistics mismatch")]
    StatisticsMismatch,
    #[error("amplitude grid violates {0:?} exchange symmetry")]
    BrokenExchangeSymmetry(Statistics),
    #[error("coefficient vector has length {got}, expected {expected}")]
    BadVectorLength { got: usize, expected: usize },
    #[error("state lies outside the one-left/one-right-particle sector")]
    OutsideSector,
    #[error("classification supports set sizes 4 and 6, got {0}")]
    UnsupportedSetSize(usize),
    #[error("operation is defined for qutrits only (d = 3), got d = {0}")]
    RequiresQutrit(usize),
    #[error("verifier is defined for bosons only")]
    RequiresBosons,
    #[error("set must be non-empty and duplicate-free")]
    MalformedSet,
    #[error("subset size {k} exceeds the {total} available Bell labels")]
    SubsetTooLarge { k: usize, total: usize },
    #[error("invalid search configuration: {0}")]
    BadSearchConfig(String),
    #[error("operator is not square: {rows}x{cols}")]
    NonSquareOperator { rows: usize, cols: usize },
    #[error("state vector must have unit norm")]
    NotUnitNorm,
    #[error("verification failed in step `{0}`")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
