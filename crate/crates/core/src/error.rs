use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    /// A point that must lie in the (epsilon-)interior of `dom f` does not.
    #[error("{function}: point outside the interior of the domain (coordinate {coordinate:?}, value {value})")]
    Domain {
        function: String,
        coordinate: Option<usize>,
        value: f64,
    },

    /// A dual point that must lie in the interior of `dom f*` does not.
    #[error("{function}: point outside the interior of the conjugate domain (coordinate {coordinate:?}, value {value})")]
    ConjugateDomain {
        function: String,
        coordinate: Option<usize>,
        value: f64,
    },

    #[error("{function} does not support {capability}")]
    Unsupported {
        function: String,
        capability: &'static str,
    },

    #[error("no projection found: {reason} (iterations {iterations}, residual {residual:e})")]
    NoProjection {
        reason: String,
        iterations: usize,
        residual: f64,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
