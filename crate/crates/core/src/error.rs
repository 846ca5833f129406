use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("alphabet mismatch: expected J = {expected}, got J = {found}")]
    AlphabetMismatch { expected: u8, found: u8 },
    #[error("distance to an empty set is undefined")]
    EmptySet,
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A constructor refused its input; the message names the violated condition.
    #[error("construction refused: {reason}{}", witness.as_ref().map(|w| format!("; witness {w}")).unwrap_or_default())]
    Refused { reason: String, witness: Option<String> },
    #[error("transition probability {value} outside [0, 1] at {at}")]
    ProbabilityOutOfRange { value: f64, at: String },
    #[error("unknown builtin filter {0:?}")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
