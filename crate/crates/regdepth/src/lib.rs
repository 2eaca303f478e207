//! Std companion to [`regdepth_core`]: CSV dataset files, JSON report
//! shapes, budget configuration from the environment, and the `regdepth`
//! command-line tool built on them.

pub mod budget;
pub mod csvio;
pub mod report;

pub use regdepth_core as core;

use thiserror::Error;

/// Errors raised by the IO layer; core errors pass through.
#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Core(#[from] regdepth_core::Error),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type AppResult<T> = Result<T, AppError>;

/// Process exit codes used by the CLI.
pub mod exit_code {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const BUDGET: i32 = 3;
    pub const ATTACK: i32 = 4;
}

impl AppError {
    /// Maps an error onto the documented process exit codes.
    pub fn exit_code(&self) -> i32 {
        use regdepth_core::Error as E;
        match self {
            AppError::Core(E::Budget { .. }) => exit_code::BUDGET,
            AppError::Core(E::AttackConstructionFailed { .. }) => exit_code::ATTACK,
            _ => exit_code::INPUT,
        }
    }
}
