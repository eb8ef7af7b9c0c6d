use serde::Serialize;
use serde_json::Value;

use detchern::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// What a command returns: machine-readable results plus text lines.
pub struct Outcome {
    pub base: String,
    pub results: Value,
    pub text: Vec<String>,
    /// Only selftest can fail without an error.
    pub passed: bool,
}

#[derive(Serialize)]
pub struct Report<'a> {
    pub command: &'a str,
    pub base: &'a str,
    pub results: &'a Value,
    pub timing_ms: u64,
    pub version: &'static str,
}

#[derive(Serialize)]
pub struct Diagnostic {
    pub code: &'static str,
    pub message: String,
    pub location: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hint: Option<String>,
}

impl Diagnostic {
    pub fn from_error(e: &Error, fallback_location: &str) -> Self {
        let location = match e {
            Error::Parse { location, .. } => location.clone(),
            Error::NotExpressible { tuple, .. } => format!("chart tuple {tuple:?}"),
            _ => fallback_location.to_string(),
        };
        let message = match e {
            Error::Parse { message, .. } => message.clone(),
            other => other.to_string(),
        };
        let hint = match e {
            Error::DivisionObstruction { .. } => {
                Some("the Newton path divides by k; use --split for sums of line bundles".into())
            }
            Error::NotFp => Some("pass --p <prime> or --base Fp:<prime>".into()),
            _ => None,
        };
        Diagnostic {
            code: e.code(),
            message,
            location,
            hint,
        }
    }

    pub fn render(&self) -> String {
        let mut s = format!("error[{}]: {} (at {})", self.code, self.message, self.location);
        if let Some(h) = &self.hint {
            s.push_str(&format!("\n  hint: {h}"));
        }
        s
    }
}

/// Exit status for an error: 2 for malformed input, 1 otherwise.
pub fn exit_code(e: &Error) -> u8 {
    if e.is_input_error() {
        2
    } else {
        1
    }
}
