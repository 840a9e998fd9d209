//! Command implementations behind the `kerrsqueeze` binary: sweep and Monte
//! Carlo drivers, baseline reporting, plot-data emission, and the manifest
//! machinery that makes every output reproducible byte-for-byte.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod manifest;
pub mod plot;

/// Tool version recorded in every manifest.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// CSV schema version; header names are part of the external contract.
pub const CSV_SCHEMA: &str = "v1";

/// Exit classification for the binary.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable config, invalid combination: exit code 2.
    Config(String),
    /// Optimization or Monte Carlo level failure: exit code 3.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message())
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub(crate) fn numerical_err(msg: impl Into<String>) -> CliError {
    CliError::Numerical(msg.into())
}
