use std::path::PathBuf;

use thiserror::Error;

/// A single problem found while reading a scan configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigIssue {
    /// Dotted key path, e.g. `system.kappa`.
    pub key: String,
    /// 1-based line in the source text, when it could be located.
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.key, self.message),
            None => write!(f, "{}: {}", self.key, self.message),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-amplifying regime: net gain G = {gain:e} must be positive")]
    NonAmplifying { gain: f64 },

    #[error("steady state did not converge after {iterations} iterations (last change {residual:e})")]
    SteadyStateDiverged { iterations: usize, residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("undefined quantity: {0}")]
    Undefined(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("configuration errors:\n{}", format_issues(.0))]
    Config(Vec<ConfigIssue>),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn format_issues(issues: &[ConfigIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
