use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input data violates a hard precondition (e.g. U ≤ 0).
    #[error("data validation failed at {location}: {message}")]
    Validation { location: String, message: String },

    /// Physical <-> Crocco conversion failed.
    #[error("transform error: {0}")]
    Transform(String),

    /// Grid, scenario or configuration problem detected before compute.
    #[error("configuration error: {0}")]
    Config(String),

    /// Configuration file syntax or key error.
    #[error("config {path}:{line}: {message}")]
    ConfigSyntax {
        path: String,
        line: usize,
        message: String,
    },

    /// Bad argument to an estimate or kernel routine.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Newton failure, negativity, non-finite quadrature.
    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("step {step} failed: {source}")]
    Step { step: usize, source: Box<Error> },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the CLI: 2 for configuration problems,
    /// 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::ConfigSyntax { .. }
            | Error::Parameter(_)
            | Error::Validation { .. }
            | Error::Io(_) => 2,
            Error::Transform(_) | Error::Numerical(_) => 3,
            Error::Step { source, .. } => source.exit_code(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
