use thiserror::Error;

/// Errors raised by the spacings core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no observations supplied")]
    EmptyInput,
    #[error("observation {index} = {value} lies outside [0, 1)")]
    ValueOutOfRange { index: usize, value: f64 },
    #[error("spacing order must be at least 1")]
    ZeroOrder,
    #[error("order m = {m} must be smaller than the arc count n = {n}")]
    OrderTooLarge { m: usize, n: usize },
    #[error("argument {0} must be positive")]
    NonPositiveArgument(f64),
    #[error("argument {got} is below the minimum {min}")]
    ArgumentTooSmall { got: u64, min: u64 },
    #[error("tuple function left its domain at window {index}")]
    DomainViolation { index: usize },
    #[error("zero spacing at window {index}; the log statistic is undefined")]
    ZeroSpacing { index: usize },
    #[error("function family has {got} members, expected {expected}")]
    FamilyLengthMismatch { expected: usize, got: usize },
    #[error("no closed-form moments for a custom statistic")]
    UnsupportedKind,
    #[error("asymptotic variance {0} is not positive")]
    DegenerateVariance(f64),
    #[error("non-finite function value at draw {draw}")]
    NonFiniteSample { draw: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("replication {replication} failed: {kind}")]
    Replication { replication: usize, kind: ReplicationFailure },
}

/// The statistic error that aborted a simulated replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ReplicationFailure {
    #[error("zero spacing at window {0}")]
    ZeroSpacing(usize),
    #[error("domain violation at window {0}")]
    DomainViolation(usize),
    #[error("degenerate variance")]
    DegenerateVariance,
}

impl Error {
    pub(crate) fn in_replication(self, replication: usize) -> Error {
        let kind = match self {
            Error::ZeroSpacing { index } => ReplicationFailure::ZeroSpacing(index),
            Error::DomainViolation { index } => ReplicationFailure::DomainViolation(index),
            Error::DegenerateVariance(_) => ReplicationFailure::DegenerateVariance,
            other => return other,
        };
        Error::Replication { replication, kind }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
