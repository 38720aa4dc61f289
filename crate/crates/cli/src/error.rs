use std::fmt;

use qsl_core::Error;

/// Exit status of a failed run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    /// Unreadable input: bad JSON, wrong shapes, unknown names.
    Parse = 1,
    /// Well-formed input that breaks a precondition.
    Validation = 2,
    /// `verify` found the search and the formula disagreeing.
    Discrepancy = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::Parse,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::BadShape { .. }
            | Error::EmptyMatrix
            | Error::BadPauli(_)
            | Error::MixedPauliLengths
            | Error::EmptyPauliList
            | Error::UnknownPreset(_)
            | Error::UnknownParameter(_) => ExitKind::Parse,
            _ => ExitKind::Validation,
        };
        let message = match &e {
            Error::Invalid(violations) => violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("\n"),
            other => other.to_string(),
        };
        Self { kind, message }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::parse(format!("invalid JSON: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::parse(format!("I/O error: {e}"))
    }
}
