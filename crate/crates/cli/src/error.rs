use std::path::PathBuf;

use thiserror::Error;

/// Exit codes: `0` verified or found, `1` violated or obstructed, `2`
/// inconclusive, and the sysexits range for failures.
pub mod exit {
    pub const OK: i32 = 0;
    pub const NEGATIVE: i32 = 1;
    pub const INCONCLUSIVE: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const SCHEMA: i32 = 65;
    pub const NO_INPUT: i32 = 66;
    pub const DEGREE: i32 = 67;
    pub const INTERNAL: i32 = 70;
    pub const IO: i32 = 74;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: file not found", .0.display())]
    NotFound(PathBuf),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {message}", path.display())]
    Schema { path: PathBuf, message: String },

    #[error(transparent)]
    Core(#[from] massey_core::Error),
}

impl CliError {
    pub fn code(&self) -> i32 {
        use massey_core::Error as E;
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::NotFound(_) => exit::NO_INPUT,
            CliError::Io { .. } => exit::IO,
            CliError::Schema { .. } => exit::SCHEMA,
            CliError::Core(e) => match e {
                E::InvalidParameter(_) => exit::USAGE,
                E::Schema(_) | E::MalformedTable(_) | E::BadRational(_) | E::UnknownName(_) | E::InvalidStructure(_) => {
                    exit::SCHEMA
                }
                E::DegreeMismatch(_)
                | E::DimensionMismatch { .. }
                | E::OutOfRange { .. }
                | E::NotInSpan
                | E::NotVerified(_)
                | E::NotADeformation(_) => exit::DEGREE,
                _ => exit::INTERNAL,
            },
        }
    }

    /// Short diagnostic label printed with the message.
    pub fn label(&self) -> &'static str {
        match self.code() {
            exit::USAGE => "usage",
            exit::NO_INPUT => "not-found",
            exit::SCHEMA => "schema",
            exit::DEGREE => "degree",
            exit::IO => "io",
            _ => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
