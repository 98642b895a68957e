use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the crate, from operator-kernel
/// validation up to scenario parsing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not a projection (idempotency deviation {0:.3e})")]
    NotProjection(f64),
    #[error("vector is not unit norm (deviation {0:.3e})")]
    NotUnitNorm(f64),
    #[error("matrix is not a density operator: {0}")]
    NotDensity(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("ambient dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("context would be trivial: the identity is its only atom")]
    TrivialContext,
    #[error("duplicate context id `{0}`")]
    DuplicateId(String),
    #[error("unknown context `{0}`")]
    UnknownContext(String),
    #[error("context `{0}` is not below `{1}`")]
    NotBelow(String, String),
    #[error("operator does not belong to the context: {0}")]
    NotInContext(String),
    #[error("operands were built over different presheaves")]
    PresheafMismatch,
    #[error("threshold {0} lies outside (0, 1]")]
    BadThreshold(f64),
    #[error("{what}: {got} exceeds the enumeration limit {limit}")]
    CapacityExceeded {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("state is not pure (rank {0})")]
    NotPure(usize),
    #[error("reconstruction underdetermined: design rank {rank} < {needed} real parameters")]
    Underdetermined { rank: usize, needed: usize },
    #[error("reconstruction residual {0:.3e} exceeds 1e-6")]
    InconsistentData(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),
    #[error("validation failed at `{path}`: {reason}")]
    Validation { path: String, reason: String },
    #[error("model document failed its integrity check")]
    Integrity,
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),
    #[error("malformed interval list: {0}")]
    BadInterval(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
