use std::fmt::Display;

use thiserror::Error;

/// A failed run. The variant decides the process exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("evaluation error: {0}")]
    Evaluation(String),
    #[error("nothing to plot: the trace has no rows")]
    EmptyTrace,
}

/// Problems with the input data become data errors, bad parameters become
/// config errors, and the rest are evaluation errors.
impl From<tourpp::Error> for CliError {
    fn from(e: tourpp::Error) -> Self {
        use tourpp::Error as E;
        match e {
            E::Shape(_) | E::InvalidData(_) | E::DegenerateColumn(_) => CliError::data(e),
            E::InvalidParameter(_) | E::UnknownIndex(_) => CliError::config(e),
            _ => CliError::evaluation(e),
        }
    }
}

impl CliError {
    pub fn config(e: impl Display) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn data(e: impl Display) -> Self {
        CliError::Data(e.to_string())
    }

    pub fn evaluation(e: impl Display) -> Self {
        CliError::Evaluation(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) | CliError::EmptyTrace => 3,
            CliError::Evaluation(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Data(_) => "data",
            CliError::Evaluation(_) => "evaluation",
            CliError::EmptyTrace => "empty_trace",
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        })
        .to_string()
    }
}
