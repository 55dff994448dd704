use std::path::PathBuf;

/// Failures of a CLI run, each mapped to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] gessel::Error),
    #[error("{path}:{line}: {msg}")]
    Config { path: PathBuf, line: usize, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{} of {} checks failed: {}", failed.len(), total, failed.join(", "))]
    Checks { failed: Vec<String>, total: usize },
}

impl CliError {
    /// 1 for failed checks and numerical failures, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        use gessel::Error as E;
        match self {
            CliError::Core(E::Domain(_) | E::Argument(_) | E::KernelZero { .. } | E::Range { .. }) => 2,
            CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Core(_) | CliError::Io { .. } | CliError::Checks { .. } => 1,
        }
    }
}
