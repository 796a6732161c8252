use std::path::PathBuf;

use profitcast_core::error::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: CoreError,
    },
    #[error("every grid point of {model} failed on the validation window")]
    AllGridPointsFailed { model: String },
    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{}:{line}: month {found} does not follow {expected}", path.display())]
    NonContiguousMonths { path: PathBuf, line: usize, expected: String, found: String },
    #[error("{}:{line}: negative sales value {value}", path.display())]
    NegativeSales { path: PathBuf, line: usize, value: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("a chart needs at least 2 models, got {0}")]
    TooFewModels(usize),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl BenchError {
    pub fn core(context: impl Into<String>, source: CoreError) -> Self {
        BenchError::Core { context: context.into(), source }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io { path: path.into(), source }
    }

    /// Stable variant name for machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            BenchError::Core { .. } => "Core",
            BenchError::AllGridPointsFailed { .. } => "AllGridPointsFailed",
            BenchError::Parse { .. } => "ParseError",
            BenchError::NonContiguousMonths { .. } => "NonContiguousMonths",
            BenchError::NegativeSales { .. } => "NegativeSales",
            BenchError::Config(_) => "Config",
            BenchError::TooFewModels(_) => "TooFewModels",
            BenchError::Io { .. } => "Io",
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
