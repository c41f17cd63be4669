use std::fmt;

/// Failure classes with stable exit codes.
#[derive(Debug)]
pub enum CliError {
    /// The host has no fractional decomposition (exit 2).
    Infeasible(String),
    /// A file could not be read or written (exit 3).
    Io(String),
    /// Bad arguments or input contents (exit 4).
    Config(String),
    /// The run stopped early after saving its state (exit 5).
    Interrupted(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Infeasible(_) => 2,
            CliError::Io(_) => 3,
            CliError::Config(_) => 4,
            CliError::Interrupted(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Infeasible(m) => write!(f, "infeasible: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Interrupted(m) => write!(f, "interrupted: {m}"),
        }
    }
}

pub fn config(e: impl fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<vdecomp::io::IoError> for CliError {
    fn from(e: vdecomp::io::IoError) -> Self {
        use vdecomp::io::IoError;
        match e {
            IoError::File { .. } | IoError::Write(_) => CliError::Io(e.to_string()),
            IoError::Csv(ref c) if c.is_io_error() => CliError::Io(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<vdecomp::decomp::DecompError> for CliError {
    fn from(e: vdecomp::decomp::DecompError) -> Self {
        use vdecomp::decomp::DecompError;
        match e {
            DecompError::Infeasible(_) | DecompError::UncoveredPair(..) => CliError::Infeasible(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<vdecomp::search::SearchError> for CliError {
    fn from(e: vdecomp::search::SearchError) -> Self {
        use vdecomp::io::checkpoint::CheckpointError;
        use vdecomp::search::SearchError;
        match e {
            SearchError::Interrupted { .. } => CliError::Interrupted(e.to_string()),
            SearchError::Checkpoint(CheckpointError::Io { .. }) => CliError::Io(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}
