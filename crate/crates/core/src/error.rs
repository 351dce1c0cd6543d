use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("representatives {0} and {1} do not denote the same fraction")]
    NotEquivalent(String, String),

    #[error("homomorphism is not multiplicative at ({0}, {1})")]
    NotMultiplicative(String, String),

    #[error("cocycle identity fails at {0}")]
    CocycleViolation(String),

    #[error("multiplier is not normalized at {0}")]
    NotNormalized(String),

    #[error("element cannot be localized: {0}")]
    Localization(String),

    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
