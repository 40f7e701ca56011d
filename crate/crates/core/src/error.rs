use std::fmt;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two elements of different cyclotomic fields were combined.
    ConductorMismatch { left: u64, right: u64 },
    /// Inversion of zero, or zero base with a negative exponent.
    DivisionByZero,
    /// An operation received a zero input it cannot accept.
    ZeroInput(&'static str),
    /// An element does not lie in the requested subfield.
    NotInSubfield { conductor: u64, target: u64 },
    /// Conductor exceeds the configured cap.
    ConductorTooLarge { m: u64, max: u64 },
    /// A parameter failed validation (non-prime, bad primitive root, ...).
    InvalidParameter(String),
    /// Integer factorization gave up within the configured bound.
    FactorizationFailure(String),
    /// Hensel precision cap reached before a valuation was determined.
    PrecisionExceeded { q: u64, cap: u32 },
    /// A construction precondition failed or produced degenerate data.
    Degenerate(String),
    /// Expression syntax error with a byte offset into the source.
    Parse { message: String, offset: usize },
    /// Invariant violation that indicates a defect, not a user error.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ConductorMismatch { left, right } => {
                write!(f, "conductor mismatch: {left} vs {right}")
            }
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::ZeroInput(what) => write!(f, "zero input not allowed: {what}"),
            Error::NotInSubfield { conductor, target } => {
                write!(f, "element of Q(zeta_{conductor}) does not lie in Q(zeta_{target})")
            }
            Error::ConductorTooLarge { m, max } => {
                write!(f, "conductor {m} exceeds configured maximum {max}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::FactorizationFailure(msg) => write!(f, "factorization failure: {msg}"),
            Error::PrecisionExceeded { q, cap } => {
                write!(f, "Hensel precision cap {cap} exceeded at q={q}")
            }
            Error::Degenerate(msg) => write!(f, "degenerate construction: {msg}"),
            Error::Parse { message, offset } => {
                write!(f, "parse error at offset {offset}: {message}")
            }
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
