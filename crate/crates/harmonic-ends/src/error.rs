//! Command errors and their exit codes.

use harmonic_ends_core::endspec::ValidationReport;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or malformed end definition.
    #[error("input error: {0}")]
    Input(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("output error: {0}")]
    Output(String),
    /// Validation failed; the report is still printed.
    #[error("validation failed: {}", summary(.0))]
    Invalid(Box<ValidationReport>),
    #[error(transparent)]
    Module(#[from] harmonic_ends_core::Error),
}

fn summary(report: &ValidationReport) -> String {
    report
        .issues
        .first()
        .map(|issue| issue.to_error().to_string())
        .unwrap_or_else(|| "no issues".into())
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Config(_) | CliError::Output(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Module(_) => 3,
        }
    }
}
