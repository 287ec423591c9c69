use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A matrix or Bloch vector fails the state invariants (Hermiticity,
    /// unit trace, positivity, length bound).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter point where the closed-form density degenerates
    /// (point-mass law or division by zero).
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    /// An iterative numerical routine failed to reach its tolerance.
    #[error(
        "numerical failure in {what}: best estimate {estimate} with error {error_bound} \
         after {subdivisions} subdivisions (requested {requested})"
    )]
    NumericalFailure {
        what: String,
        estimate: f64,
        error_bound: f64,
        requested: f64,
        subdivisions: usize,
    },

    /// Caller broke an API contract (for example unsorted input where
    /// sorted input is required).
    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    pub fn invalid_state(msg: impl Into<String>) -> Self {
        Error::InvalidState(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateParameter(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
