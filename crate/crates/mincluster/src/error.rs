use std::path::PathBuf;

use mincluster_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed DOT at line {line}: {message}")]
    Dot { line: usize, message: String },
    #[error("{0} sample(s) disagree with the oracle")]
    Mismatch(usize),
    #[error("all {0} samples failed")]
    AllSamplesFailed(usize),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit status: 1 oracle mismatch, 2 invalid input or parameters,
    /// 3 generator exhaustion, 4 graph validation failure, 5 resource cap.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Core(e) => match e {
                CoreError::DisruptiveEdgeExhausted { .. } => 3,
                CoreError::EmptyVertexSet
                | CoreError::DuplicateVertex(_)
                | CoreError::DanglingEdgeEndpoint(..)
                | CoreError::CycleDetected
                | CoreError::MultipleSources(_)
                | CoreError::MultipleTargets(_)
                | CoreError::RedundantEdge(..) => 4,
                CoreError::ResourceCap { .. } => 5,
                _ => 2,
            },
            CliError::AllSamplesFailed(_) => 3,
            CliError::Io { .. } | CliError::Json(_) | CliError::Dot { .. } | CliError::Usage(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
