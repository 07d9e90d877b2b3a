use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run. Statistical rejections are results, not errors.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{}:{line}: cannot parse {token:?} as a number", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        token: String,
    },
    #[error("{}{}: {message}", path.display(), line.map(|l| format!(":{l}")).unwrap_or_default())]
    Input {
        path: PathBuf,
        line: Option<usize>,
        message: String,
    },
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Pipeline(#[from] spikerate::Error),
}

impl CliError {
    /// 2 configuration, 3 unreadable or invalid input, 4 pipeline failure,
    /// 5 output failure. Clap's own usage errors also exit with 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Parse { .. } | CliError::Input { .. } | CliError::Read { .. } => 3,
            CliError::Pipeline(_) => 4,
            CliError::Write { .. } => 5,
        }
    }

    pub(crate) fn config(e: impl std::fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }
}
