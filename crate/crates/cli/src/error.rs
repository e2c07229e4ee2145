use spacings_core::Error;
use thiserror::Error;

/// A failed command and the exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input data.
    #[error("input error: {0}")]
    Input(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    /// The statistic is undefined on this sample (ties under a log, …).
    #[error("statistic error: {0}")]
    Domain(String),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            _ => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ZeroSpacing { .. }
            | Error::DomainViolation { .. }
            | Error::DegenerateVariance(_)
            | Error::NonFiniteSample { .. }
            | Error::Replication { .. } => CliError::Domain(format!("{e} ({e:?})")),
            Error::EmptyInput | Error::ValueOutOfRange { .. } => CliError::Input(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}
