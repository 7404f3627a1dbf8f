use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    NotOddPrime(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("inseparable polynomial: roots {0} and {1} coincide")]
    DuplicateRoot(usize, usize),
    #[error("genus < 2 unsupported ({0} roots)")]
    GenusTooSmall(usize),
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("non-integral equation: {0}")]
    NonIntegralEquation(String),
    #[error("relative depth is undefined for the top cluster")]
    TopCluster,
    #[error("cluster {0} is not principal")]
    NotPrincipal(String),
    #[error("operation requires root values")]
    MissingRoots,
    #[error("invalid transform: {0}")]
    InvalidTransform(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    /// Whether the error reflects a mathematically invalid input (as opposed
    /// to one that could not be read at all).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::GenusTooSmall(_)
                | Error::NonIntegralEquation(_)
                | Error::NotPrincipal(_)
                | Error::Precondition(_)
                | Error::InvalidTransform(_)
                | Error::DuplicateRoot(..)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(e.to_string())
    }
}
