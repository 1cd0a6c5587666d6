use thiserror::Error;

/// Errors raised by the construction and verification layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown catalog name `{0}`")]
    UnknownNet(String),
    #[error("period vectors are rank deficient")]
    RankDeficient,
    #[error("colinear strings overlap on line {0}")]
    OverlappingStrings(String),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not representable exactly: {0}")]
    NotRepresentable(String),
    #[error("quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },
    #[error("graph disconnected between the requested nodes")]
    Disconnected,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
