use lempert_core::DomainKind;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const NON_MEMBER: i32 = 2;
    pub const VERIFY_FAILED: i32 = 3;
    pub const NORMALIZATION: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse point `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("point is not in {0}")]
    NonMember(DomainKind),
    #[error("normalization failed (residual {0:e})")]
    Normalization(f64),
    #[error(transparent)]
    Core(lempert_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("cannot start worker threads: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

impl From<lempert_core::Error> for CliError {
    fn from(e: lempert_core::Error) -> Self {
        match e {
            lempert_core::Error::OutsideDomain(kind) => CliError::NonMember(kind),
            lempert_core::Error::NormalizationFailure { residual } => CliError::Normalization(residual),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NonMember(_) => exit::NON_MEMBER,
            CliError::Normalization(_) => exit::NORMALIZATION,
            _ => exit::USAGE,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
