use std::path::Path;

/// A failed command: message plus process exit code (1 runtime, 2 usage or
/// input).
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }

    /// Wraps a library error with the file it concerns.
    pub fn at(path: &Path, e: impl Into<egoten::Error>) -> Self {
        let e = e.into();
        CliError {
            code: if e.is_input_error() { 2 } else { 1 },
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<egoten::Error> for CliError {
    fn from(e: egoten::Error) -> Self {
        CliError {
            code: if e.is_input_error() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}
