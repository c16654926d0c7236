use std::fmt;

use serde_json::json;

/// Failures of a command, partitioned by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad parameters or malformed input (exit 2).
    Input(String),
    /// The slice inverter gave up; says nothing about the fiber (exit 3).
    NotFound,
    /// The input element is not relatively regular (exit 4).
    NonRegular { centralizer_dim: usize, rank_theta: usize },
    /// Anything else, including a case without a triple (exit 1).
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
            CliError::NotFound => 3,
            CliError::NonRegular { .. } => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::NotFound => "not_found",
            CliError::NonRegular { .. } => "non_regular",
            CliError::Failed(_) => "failed",
        }
    }

    /// The JSON error object printed on failure.
    pub fn to_json(&self) -> String {
        let body = json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        });
        serde_json::to_string_pretty(&body).expect("json values serialize")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Failed(m) => f.write_str(m),
            CliError::NotFound => f.write_str(&ksection::Error::NotFound.to_string()),
            CliError::NonRegular {
                centralizer_dim,
                rank_theta,
            } => write!(
                f,
                "element is not relatively regular: centralizer dimension {centralizer_dim}, rank of theta {rank_theta}"
            ),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ksection::Error> for CliError {
    fn from(e: ksection::Error) -> Self {
        use ksection::Error as E;
        match e {
            E::NotFound => CliError::NotFound,
            E::ConstraintViolation { .. }
            | E::DimensionMismatch { .. }
            | E::NotSquare { .. }
            | E::NotInSpace(_)
            | E::NeedsBothBlocks
            | E::Parse(_) => CliError::Input(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}
