use gausshappy::Error as CoreError;
use serde_json::json;
use thiserror::Error;

use crate::literal::ParseError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    /// A computed result failed its own verification.
    #[error("{0}")]
    Failed(String),

    #[error("{0}")]
    Output(String),
}

impl CliError {
    /// Machine-readable code for JSON error objects.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse_error",
            CliError::Usage(_) => "usage",
            CliError::Failed(_) => "verification_failed",
            CliError::Output(_) => "io_error",
            CliError::Core(e) => match e {
                CoreError::InvalidBase(_) | CoreError::OddBaseRequired(_) => "invalid_base",
                CoreError::DigitOutOfRange { .. }
                | CoreError::MixedSigns { .. }
                | CoreError::LeadingZeroPair => "invalid_digits",
                CoreError::InvalidArgument(_) => "invalid_argument",
                CoreError::Capacity(_) => "capacity",
                CoreError::NotFoundWithinLimit { .. }
                | CoreError::NotFoundWithinBound { .. }
                | CoreError::Obstructed(_) => "not_found",
                CoreError::WrongStep { .. } => "wrong_step",
                CoreError::RunTooShort { .. } => "run_too_short",
                CoreError::UnhappyTerm { .. } => "unhappy_term",
                CoreError::RleOverlap { .. }
                | CoreError::NegativeSummand
                | CoreError::TooLargeToMaterialize { .. }
                | CoreError::Invariant(_) => "invariant",
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.code() {
            "not_found" => EXIT_NOT_FOUND,
            "invariant" | "verification_failed" | "io_error" => EXIT_INVARIANT,
            _ => EXIT_USAGE,
        }
    }

    /// `{"error": {"code", "exit", "message"}}`, plus `"reason"` for
    /// not-found results.
    pub fn to_json(&self) -> serde_json::Value {
        let mut body = json!({
            "code": self.code(),
            "exit": self.exit_code(),
            "message": self.to_string(),
        });
        let reason = match self {
            CliError::Core(CoreError::Obstructed(_)) => Some("obstructed"),
            CliError::Core(
                CoreError::NotFoundWithinLimit { .. } | CoreError::NotFoundWithinBound { .. },
            ) => Some("bound_exhausted"),
            _ => None,
        };
        if let Some(reason) = reason {
            body["reason"] = json!(reason);
        }
        json!({ "error": body })
    }
}
