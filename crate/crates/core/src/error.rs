use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Lattice size outside the supported domain (odd, too small).
    #[error("invalid lattice size L = {size}: {reason}")]
    Size { size: usize, reason: &'static str },

    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed argument (time grids, ranges, flags).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The exact-diagonalization oracle refuses sizes whose dense matrices
    /// would not fit comfortably in memory.
    #[error("resource guard: L = {size} outside the oracle range [{min}, {max}]")]
    ResourceGuard { size: usize, min: usize, max: usize },

    #[error("ground state is degenerate within the even-parity block (gap {gap:e})")]
    Degenerate { gap: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
