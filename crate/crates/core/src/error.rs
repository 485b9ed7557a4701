use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value is not {p}-integral{}", index.map(|i| format!(" (coefficient {i})")).unwrap_or_default())]
    NotPLocal { p: u64, index: Option<usize> },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("coefficient has a pole at zero")]
    NotSeriesExpandable,
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("operator is not MOM at zero")]
    NotMomAtZero,
    #[error("leading recurrence polynomial vanishes at m = {m}")]
    LeadingZero { m: usize },
    #[error("initial value {index} contradicts the recurrence")]
    InitialMismatch { index: usize },
    #[error("rational reconstruction failed: {0}")]
    ReconstructionFailed(String),
    #[error("height {height} exceeds bound {bound}")]
    HeightBoundViolated { height: u64, bound: u64 },
    #[error("no cycle of the section operator within {steps} steps")]
    NoCycleFound { steps: usize },
    #[error("coefficient equation is singular at m = {m}")]
    SylvesterSingular { m: usize },
    #[error("unknown series '{0}'")]
    UnknownSeries(String),
    #[error("unknown case '{0}'")]
    UnknownCase(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
