use thiserror::Error;

/// Exit status for a run that completed but found invariant violations.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit status for configuration and usage errors.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for runtime and capacity errors.
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] ffuniv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use ffuniv::Error as E;
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Core(e) => match e {
                E::Precondition(_) | E::Domain(_) | E::Unsupported(_) | E::Parse(_) => EXIT_CONFIG,
                E::Construction { .. } => EXIT_VIOLATION,
                E::Capacity { .. } | E::Pole(_) | E::NonConvergence { .. } => EXIT_RUNTIME,
            },
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => EXIT_RUNTIME,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
