use ambx_core::CodecError;
use thiserror::Error;

/// CLI-level failures, each mapped to a process exit code:
/// 0 success, 1 internal/self-check, 2 decode stalled, 3 usage, 4 corrupt.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("corrupt container: {0}")]
    Corrupt(String),

    #[error("decode stalled: {0}")]
    Stalled(String),

    #[error("self-check failed: {0} finding(s)")]
    VerifyFailed(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Codec(CodecError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Corrupt(_) => 4,
            CliError::Stalled(_) => 2,
            CliError::VerifyFailed(_) => 1,
            CliError::Io(_) => 1,
            CliError::Codec(e) => match e {
                CodecError::Parameter(_) | CodecError::PayloadTooLarge { .. } => 3,
                CodecError::Structure(_)
                | CodecError::Inconsistent(_)
                | CodecError::WidthMismatch { .. } => 4,
                CodecError::Hypothesis(_) => 3,
            },
        }
    }
}

impl From<CodecError> for CliError {
    fn from(e: CodecError) -> Self {
        CliError::Codec(e)
    }
}
