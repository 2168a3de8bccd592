use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the structured solvers and checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    Dimension {
        op: &'static str,
        expected: String,
        found: String,
    },

    #[error("singular matrix: {what}")]
    Singular { what: String },

    #[error("evaluation at z = 0 of a symbol with negative-degree support")]
    SingularEvaluation,

    #[error("{symbol} must be supported in {expected} degrees, found degree {degree}")]
    Support {
        symbol: &'static str,
        expected: &'static str,
        degree: i64,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// `a0` or `d0` is numerically singular; the inversion formulas need both invertible
    /// (weakening to one invertible corner is not implemented).
    #[error("corner coefficient {which} is singular (condition number {cond:.3e}); at least one of a0, d0 must be invertible and this implementation requires both")]
    SingularCorner { which: &'static str, cond: f64 },

    #[error("data violate the necessary identity {identity} (residual {residual:.3e} > refusal threshold {threshold:.3e})")]
    InvalidData {
        identity: &'static str,
        residual: f64,
        threshold: f64,
    },

    /// Smallest singular value of `M11` or `M22` fell below the injectivity threshold.
    #[error("no solution: {operator} is not one-to-one on the window (smallest singular value {sigma_min:.3e} <= {threshold:.3e})")]
    NoSolution {
        operator: &'static str,
        sigma_min: f64,
        threshold: f64,
    },

    #[error("synthesis failed: {0}")]
    SynthesisFailure(String),

    #[error("under-determined system: {0}")]
    UnderDetermined(String),

    #[error("no solution path available: {0}")]
    Unavailable(String),
}

impl Error {
    pub(crate) fn dim(op: &'static str, expected: impl ToString, found: impl ToString) -> Self {
        Error::Dimension {
            op,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
