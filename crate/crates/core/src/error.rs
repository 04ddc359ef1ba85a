use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("dimension mismatch: expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("CFL condition violated: dt = {dt:.3e}, largest admissible dt = {max_dt:.3e}")]
    CflViolation { dt: f64, max_dt: f64 },

    #[error("non-finite state detected at t = {time}")]
    NonFinite { time: f64 },

    #[error("quadrature budget of {budget} nodes exceeded (last change {last_change:.3e})")]
    QuadratureBudgetExceeded { budget: usize, last_change: f64 },

    #[error("malformed field dump: {0}")]
    Dump(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("config: {0}")]
    Config(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
