use std::path::PathBuf;

use serde_json::json;
use sgfloquet::{Error, SearchFailure};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Usage(String),
    /// Selfcheck ran but some check failed; holds the full report.
    ChecksFailed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// 2 for domain and usage errors, 3 for I/O, 4 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::ChecksFailed(_) => 4,
            CliError::Core(Error::Domain(_)) => 2,
            CliError::Core(Error::Search(SearchFailure::WrongClass(_))) => 2,
            CliError::Core(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::ChecksFailed(_) => "selfcheck",
            CliError::Core(Error::Domain(_)) => "domain",
            CliError::Core(Error::Convergence { .. }) => "convergence",
            CliError::Core(Error::Accuracy { .. }) => "accuracy",
            CliError::Core(Error::Structure(_)) => "structure",
            CliError::Core(Error::Search(_)) => "search",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Io { path, source } => format!("{}: {source}", path.display()),
            CliError::ChecksFailed(_) => "selfcheck failed".into(),
            // Domain messages are reported bare, e.g. "luminal speed excluded".
            CliError::Core(Error::Domain(m)) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = json!({ "error": self.message(), "kind": self.kind() });
        serde_json::to_string_pretty(&doc).expect("error document serializes")
    }
}
