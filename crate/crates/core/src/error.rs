use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The CLI prints [`EdiError::name`] on stderr, so variant names are part of
/// the observable surface.
#[derive(Debug, Error)]
pub enum EdiError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unknown atom `{name}` at position {pos}")]
    UnknownAtom { name: String, pos: usize },

    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),

    #[error("invalid world: {0}")]
    InvalidWorld(String),

    #[error("invalid belief state: {0}")]
    InvalidBeliefState(String),

    #[error("invalid pseudo-distance: {0}")]
    InvalidDistance(String),

    #[error("invalid rational `{0}`")]
    InvalidRational(String),

    #[error("Bayesian conditioning is undefined: the evidence has prior probability 0")]
    ConditioningUndefined,

    #[error("evidence has no models")]
    EmptyEvidence,

    #[error("normalizing factor is zero: the weight function assigns no mass to any evidence world")]
    DegenerateNormalization,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("weight function rejected: {0}")]
    RejectedWeight(String),

    #[error("suite too large: {0}")]
    SuiteTooLarge(String),

    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),

    #[error("unknown operator `{0}`")]
    UnknownOperator(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl EdiError {
    /// Stable variant name, used for CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            EdiError::Syntax { .. } => "SyntaxError",
            EdiError::UnknownAtom { .. } => "UnknownAtom",
            EdiError::InvalidVocabulary(_) => "InvalidVocabulary",
            EdiError::InvalidWorld(_) => "InvalidWorld",
            EdiError::InvalidBeliefState(_) => "InvalidBeliefState",
            EdiError::InvalidDistance(_) => "InvalidDistance",
            EdiError::InvalidRational(_) => "InvalidRational",
            EdiError::ConditioningUndefined => "ConditioningUndefined",
            EdiError::EmptyEvidence => "EmptyEvidence",
            EdiError::DegenerateNormalization => "DegenerateNormalization",
            EdiError::InvalidParameter(_) => "InvalidParameter",
            EdiError::RejectedWeight(_) => "RejectedWeight",
            EdiError::SuiteTooLarge(_) => "SuiteTooLarge",
            EdiError::VocabularyMismatch(_) => "VocabularyMismatch",
            EdiError::UnknownOperator(_) => "UnknownOperator",
            EdiError::Io(_) => "IoError",
            EdiError::Json(_) => "JsonError",
        }
    }
}

pub type Result<T, E = EdiError> = std::result::Result<T, E>;
