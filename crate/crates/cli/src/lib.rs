//! File-driven front end: problem files in, JSON reports out, documented exit codes.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, every check passed |
//! | 2 | unreadable or malformed input |
//! | 3 | synthesis failure |
//! | 4 | solve refused (inconsistent data, singular corners, no accepted solution) |
//! | 5 | at least one check failed |
//! | 6 | no failures, but some checks were inconclusive |

// `!(r <= tol)` is deliberate: a NaN residual must count as a failure
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod codec;
pub mod commands;

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_SYNTHESIS: u8 = 3;
pub const EXIT_REFUSED: u8 = 4;
pub const EXIT_FAIL: u8 = 5;
pub const EXIT_INCONCLUSIVE: u8 = 6;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("synthesis failed: {0}")]
    Synthesis(String),
    #[error("refused: {0}")]
    Refused(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io { .. } => EXIT_PARSE,
            CliError::Synthesis(_) => EXIT_SYNTHESIS,
            CliError::Refused(_) => EXIT_REFUSED,
        }
    }
}
