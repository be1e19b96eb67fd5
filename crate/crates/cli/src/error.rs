use hyperideal_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inadmissible input: {}", .0.join("; "))]
    Inadmissible(Vec<String>),
    #[error("solver failure: {0}")]
    Solver(Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status: 1 inadmissible, 2 parse or io, 3 solver.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Inadmissible(_) => 1,
            CliError::Parse(_) | CliError::Io { .. } => 2,
            CliError::Solver(_) => 3,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Inadmissible(reasons) => CliError::Inadmissible(reasons),
            Error::NotASphere(_) | Error::NonManifoldEdge(..) | Error::InvalidFace(_) | Error::InvalidAngles(_) => {
                CliError::Parse(e.to_string())
            }
            other => CliError::Solver(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
