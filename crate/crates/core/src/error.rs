use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid preference: {0}")]
    InvalidPreference(String),

    #[error("invalid rule: {0}")]
    InvalidRule(String),

    #[error("invalid search request: {0}")]
    InvalidSearch(String),

    #[error("instance too large: {0} (pass --force to override)")]
    Intractable(String),

    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("invalid value `{0}`: expected a rational in [0, 1] like 1/2 or 0.5")]
    InvalidValue(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
