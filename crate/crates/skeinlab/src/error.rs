use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: denominator vanishes at the evaluation point")]
    Pole,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inadmissible colors: {0}")]
    Inadmissible(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("color bound {bound} reached at region {region}")]
    ColorBound { region: usize, bound: u32 },
    #[error("state cap exceeded: {crossings} crossings, cap {cap}")]
    StateCap { crossings: usize, cap: usize },
    #[error("half-integer phase left unresolved")]
    HalfPhase,
    #[error("computation failed: {0}")]
    Computation(String),
}

impl Error {
    /// Exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Invalid(_) | Error::Inadmissible(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
