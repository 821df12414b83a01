use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HkrError {
    #[error("invalid family id {0}")]
    InvalidFamily(String),
    #[error("inconsistent classification data for {id}: {reason}")]
    InconsistentRecord { id: String, reason: String },
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("incomplete fan: {0}")]
    IncompleteFan(String),
    #[error("class group has torsion or the projection is inconsistent: {0}")]
    ClassGroup(String),
    #[error("divisor is not Cartier: {0}")]
    NonCartier(String),
    #[error("unsupported plethysm: {0}")]
    UnsupportedPlethysm(String),
    #[error("grammar error at column {pos}: {reason}")]
    Grammar { pos: usize, reason: String },
    #[error("exact-sequence constraints are infeasible: {0}")]
    Infeasible(String),
    #[error("vector has unknown entries: {0}")]
    UnknownEntries(String),
    #[error("anchor mismatch in {recipe}: {what} expected {expected}, got {got}")]
    AnchorMismatch {
        recipe: String,
        what: String,
        expected: String,
        got: String,
    },
    #[error("no model: {0}")]
    NoModel(String),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("validation error for {id}: {check}")]
    Validation { id: String, check: String },
}

pub type Result<T> = std::result::Result<T, HkrError>;
