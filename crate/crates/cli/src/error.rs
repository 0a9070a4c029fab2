use qrl_core::reps::{RepError, RepIoError};
use qrl_core::strata::StrataError;
use qrl_core::walls::WallError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const SCHEMA: i32 = 2;
    pub const INVARIANT: i32 = 3;
    pub const MATH: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("invariant violated ({name}): {message}")]
    Invariant { name: String, message: String },
    #[error("mathematical assertion failed: {0}")]
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Schema(_) | Self::Usage(_) => exit::SCHEMA,
            Self::Invariant { .. } => exit::INVARIANT,
            Self::Math(_) => exit::MATH,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Schema(_) => "schema",
            Self::Usage(_) => "usage",
            Self::Invariant { .. } => "invariant",
            Self::Math(_) => "math",
        }
    }
}

impl From<WallError> for CliError {
    fn from(e: WallError) -> Self {
        match e {
            WallError::Consistency(_) => Self::Math(e.to_string()),
            WallError::Lattice(l) => Self::Invariant { name: l.invariant().to_string(), message: l.to_string() },
            other => Self::Invariant { name: "wall-input".to_string(), message: other.to_string() },
        }
    }
}

impl From<StrataError> for CliError {
    fn from(e: StrataError) -> Self {
        match e {
            StrataError::PairingMismatch { .. } | StrataError::WallCountMismatch { .. } => Self::Math(e.to_string()),
            StrataError::Wall(w) => w.into(),
            StrataError::Lattice(l) => Self::Invariant { name: l.invariant().to_string(), message: l.to_string() },
            StrataError::Quiver(q) => Self::Invariant { name: "quiver".to_string(), message: q.to_string() },
        }
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        Self::Invariant { name: "representation".to_string(), message: e.to_string() }
    }
}

impl From<RepIoError> for CliError {
    fn from(e: RepIoError) -> Self {
        match e {
            RepIoError::Schema(s) => Self::Schema(s),
            RepIoError::Rep(r) => r.into(),
        }
    }
}
