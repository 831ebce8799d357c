use thiserror::Error;

use crate::rationals::Slope;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("0/0 is not a slope")]
    ZeroSlope,
    #[error("expected a slope greater than 1, got {0}")]
    NotGreaterThanOne(Slope),
    #[error("empty continued fraction")]
    EmptyContinuedFraction,
    #[error("malformed continued fraction: {0}")]
    MalformedContinuedFraction(String),
    #[error("{0} is an integer slope and has no triad partners")]
    IntegerSlope(Slope),
    #[error("slope 1/0 is not allowed here")]
    InfiniteSlope,
    #[error("T({a},{b}) is not a positive torus knot (need a > b >= 2, gcd(a,b) = 1)")]
    InvalidTorusKnot { a: i64, b: i64 },
    #[error("invalid exceptional fiber ({alpha},{beta}): {reason}")]
    InvalidFiber { alpha: String, beta: String, reason: &'static str },
    #[error("Montesinos link is not in standard form (every tangle must satisfy 0 < beta < alpha)")]
    NotStandardForm,
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("expected a positive slope, got {0}")]
    NonPositiveSlope(String),
    #[error("degenerate cusp: {0}")]
    DegenerateCusp(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Diagram(#[from] crate::diagram::DiagramError),
    #[error("database: {0}")]
    Database(String),
    #[error("database entry {name}: stored determinant {stored}, computed {computed}")]
    DeterminantMismatch { name: String, stored: u64, computed: u64 },
    #[error("database entries {first} and {second} share a diagram but disagree on the verdict")]
    ConflictingVerdicts { first: String, second: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
