use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("wrong regime: {0}")]
    WrongRegime(String),
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("eventually-periodic spec violated for atom `{atom}` at n = {n}")]
    SpecViolation { atom: String, n: u64 },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("missing bound certificate for subformula {0}")]
    MissingCertificate(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
