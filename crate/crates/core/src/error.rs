use crate::kernel::Nat;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("no program registered under index {0}")]
    UnknownProgram(Nat),
    #[error("malformed program state in {0}")]
    MalformedState(&'static str),
    #[error("exact tier cannot decide: {0}")]
    NotExact(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("setup computation did not halt within {0} steps")]
    SetupDiverged(u64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse { column, message: message.into() }
    }
}
