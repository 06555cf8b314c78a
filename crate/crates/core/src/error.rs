//! Error type shared across the crate.
//!
//! Mathematical preconditions that a caller can violate map to dedicated
//! variants so the CLI can distinguish input errors (exit 2) from
//! mathematical failures (exit 1).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `pth_root` was asked for an element that is not a p-th power
    /// (some t-exponent not divisible by p after normalization).
    #[error("element is not a p-th power")]
    NotAPthPower,

    /// Specialization t ↦ c hit a zero denominator.
    #[error("denominator vanishes at the place t = {0}")]
    PoleAtPlace(String),

    /// An operation that needs a nonzero polynomial got the zero polynomial.
    #[error("zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),

    /// Conjugation by zero is undefined.
    #[error("conjugator must be nonzero")]
    ZeroConjugator,

    /// Operation requires the other host-field mode.
    #[error("operation requires {required} mode but the field is in {actual} mode")]
    ModeMismatch {
        required: &'static str,
        actual: &'static str,
    },

    /// Torsion kernel of the zero polynomial requested.
    #[error("annihilator polynomial must be nonzero")]
    ZeroAnnihilator,

    /// The module does not have good reduction at the requested place.
    #[error("bad reduction at t = {0}: {1}")]
    BadReduction(String, String),

    /// An enumeration would exceed the hard point guard.
    #[error("enumeration of {0} points exceeds the guard of {1}")]
    EnumerationTooLarge(u128, u64),

    /// λ-functions only exist on imperfect hosts; finite fields are perfect.
    #[error("λ-functions are undefined on a perfect host field (finite mode)")]
    PerfectHostField,

    /// A stated precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// Expression or file syntax error with position information.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// Descriptor or experiment file is structurally invalid.
    #[error("config error: {0}")]
    Config(String),

    /// Requested modulus is not irreducible over F_p.
    #[error("modulus polynomial is not irreducible over F_{0}")]
    NotIrreducible(u64),

    /// p must be prime.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// Structural mismatch between operands (different field specs, wrong
    /// variable counts, ...).
    #[error("incompatible operands: {0}")]
    Incompatible(String),
}

impl Error {
    /// Shorthand for `PreconditionViolated` with a formatted message.
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::PreconditionViolated(msg.into())
    }

    /// True for errors that indicate bad *input* rather than a mathematical
    /// failure; the CLI maps these to exit code 2.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::EnumerationTooLarge(..))
    }
}
