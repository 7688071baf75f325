use std::path::PathBuf;

use serde_json::json;

/// Exit statuses of the driver.
pub mod exit {
    pub const OK: i32 = 0;
    pub const OUTPUT: i32 = 1;
    pub const VALIDATION: i32 = 2;
    pub const RESOURCE: i32 = 3;
    pub const INVARIANT: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] lpst_core::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot read {path}: {source}")]
    Input {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{file}: {source}")]
    InFile {
        file: PathBuf,
        source: lpst_core::Error,
    },

    #[error("check suite found {} violated invariant(s)", failures.len())]
    CheckFailed { failures: Vec<serde_json::Value> },
}

impl CliError {
    fn core_error(&self) -> Option<&lpst_core::Error> {
        match self {
            CliError::Core(e) | CliError::InFile { source: e, .. } => Some(e),
            _ => None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        use lpst_core::Error as E;
        match self {
            CliError::Output { .. } => exit::OUTPUT,
            CliError::CheckFailed { .. } => exit::INVARIANT,
            CliError::Config(_) | CliError::Input { .. } => exit::VALIDATION,
            _ => match self.core_error() {
                Some(E::ResourceCap { .. }) => exit::RESOURCE,
                Some(E::InvariantViolated(_)) => exit::INVARIANT,
                _ => exit::VALIDATION,
            },
        }
    }

    fn kind(&self) -> &'static str {
        use lpst_core::Error as E;
        match self {
            CliError::Config(_) => "config",
            CliError::Input { .. } => "input",
            CliError::Output { .. } => "output",
            CliError::CheckFailed { .. } => "check-failed",
            _ => match self.core_error() {
                Some(E::InvalidExponent(_)) => "invalid-exponent",
                Some(E::InvalidWeights(_)) => "invalid-weights",
                Some(E::ShapeMismatch(_)) => "shape-mismatch",
                Some(E::ZeroBudget) => "zero-budget",
                Some(E::ResourceCap { .. }) => "resource-cap",
                Some(E::Precondition(_)) => "precondition",
                Some(E::InvariantViolated(_)) => "invariant-violated",
                Some(E::Degenerate { .. }) => "degenerate",
                Some(E::Parse { .. }) => "parse",
                None => "internal",
            },
        }
    }

    /// One-line JSON object describing the failure.
    pub fn diagnostic(&self) -> serde_json::Value {
        let mut d = json!({
            "status": "error",
            "exit_code": self.exit_code(),
            "kind": self.kind(),
            "message": self.to_string(),
        });
        match self {
            CliError::Input { path, .. } | CliError::Output { path, .. } => {
                d["path"] = json!(path);
            }
            CliError::InFile { file, .. } => d["path"] = json!(file),
            CliError::CheckFailed { failures } => d["failures"] = json!(failures),
            _ => {}
        }
        match self.core_error() {
            Some(lpst_core::Error::Parse { line, .. }) => d["line"] = json!(line),
            Some(lpst_core::Error::Degenerate { level, .. }) => d["level"] = json!(level),
            Some(lpst_core::Error::ResourceCap { what, size, cap }) => {
                d["resource"] = json!(what);
                d["size"] = json!(size);
                d["cap"] = json!(cap);
            }
            _ => {}
        }
        d
    }
}
