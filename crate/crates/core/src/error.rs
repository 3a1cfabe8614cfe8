use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied parameter is outside the operation's domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested work exceeds a hard resource cap.
    #[error("resource refusal: {0}")]
    ResourceRefusal(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
