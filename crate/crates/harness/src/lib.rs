//! Experiment harness around the simulator core: configuration, dataset
//! generation, seeded trial campaigns, parameter sweeps, the property
//! verification suite, and CSV/JSON reporting.

pub mod config;
pub mod problem;
pub mod sweep;
pub mod trial;
pub mod verify;

use std::fmt;
use std::path::PathBuf;

/// Harness-level failure, mapped onto the process exit codes:
/// 1 invalid config, 2 verify-suite failure, 3 I/O error.
#[derive(Debug)]
pub enum HarnessError {
    /// Configuration or input data rejected.
    Config(String),
    /// The verify suite reported at least one failing check.
    VerifyFailed { failed: Vec<String> },
    /// Filesystem failure with the path involved.
    Io { path: PathBuf, source: std::io::Error },
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            HarnessError::VerifyFailed { .. } => 2,
            HarnessError::Io { .. } => 3,
        }
    }
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Config(msg) => write!(f, "invalid config: {msg}"),
            HarnessError::VerifyFailed { failed } => {
                write!(f, "verify suite failed: {}", failed.join(", "))
            }
            HarnessError::Io { path, source } => {
                write!(f, "i/o error on {}: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for HarnessError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            HarnessError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl From<qkernel_core::Error> for HarnessError {
    fn from(e: qkernel_core::Error) -> Self {
        HarnessError::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
