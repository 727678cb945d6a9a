use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("no generic draw after {attempts} attempts: {what}")]
    Genericity { what: String, attempts: usize },
    #[error("Betti shape not applicable: {0}")]
    ShapeNotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
