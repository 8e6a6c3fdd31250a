//! Crate-wide error type.

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by point arithmetic, system steps, and analysis operations.
///
/// Precision shortfalls are always surfaced as errors; no operation silently
/// truncates or guesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two points of different kinds were combined or compared.
    KindMismatch {
        left: &'static str,
        right: &'static str,
    },
    /// Points of the same kind but with incompatible parameters
    /// (alphabet size, digit bases, fiber size).
    Incompatible(&'static str),
    /// A symbolic point ran out of trusted symbols.
    DepthExhausted { needed: usize, available: usize },
    /// An odometer point whose carry escaped the digit vector; the point is
    /// unusable for distance queries and further steps.
    Poisoned,
    /// Invalid construction data or a point outside the system's space.
    InvalidPoint(&'static str),
    /// The operation requires a different system shape (for instance chain
    /// operations on a non-skew system).
    InvalidSystem(&'static str),
    /// Cell membership cannot be decided at the available precision.
    UndecidableCell,
    /// The requested resolution needs more odometer digits than the bases
    /// vector provides.
    ResolutionTooFine { needed: usize, digits: usize },
    /// No time within the horizon at which one chain traces the other.
    NoTracingTime { horizon: usize },
    /// The system does not support the requested operation.
    Unsupported(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::KindMismatch { left, right } => {
                write!(f, "point kind mismatch: {left} vs {right}")
            }
            Error::Incompatible(what) => write!(f, "incompatible points: {what}"),
            Error::DepthExhausted { needed, available } => {
                write!(f, "depth exhausted: need {needed} trusted symbols, have {available}")
            }
            Error::Poisoned => write!(f, "odometer point poisoned by overflow"),
            Error::InvalidPoint(what) => write!(f, "invalid point: {what}"),
            Error::InvalidSystem(what) => write!(f, "invalid system for operation: {what}"),
            Error::UndecidableCell => {
                write!(f, "cell membership undecidable at available precision")
            }
            Error::ResolutionTooFine { needed, digits } => {
                write!(f, "resolution too fine: need {needed} digits, bases vector has {digits}")
            }
            Error::NoTracingTime { horizon } => {
                write!(f, "no tracing time found within horizon {horizon}")
            }
            Error::Unsupported(what) => write!(f, "unsupported operation: {what}"),
        }
    }
}

impl core::error::Error for Error {}
