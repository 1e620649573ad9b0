use thiserror::Error;

/// Errors from exact scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("division by zero")]
    DivisionByZero,
}

/// Library-level errors for symbol and residue operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),

    /// A residue was requested on a symbol whose truncation floor does not
    /// certify the needed coefficient. Distinct from a certified zero.
    #[error("residue needs the coefficient at {needed}, but the symbol is only certified down to floor {floor}")]
    UncertifiedResidue { needed: String, floor: String },

    #[error("operation requires an exact symbol, but this one is truncated below {floor}")]
    InexactSymbol { floor: String },

    #[error("wrong context: {operation} requires {expected}, got {got}")]
    WrongContext {
        operation: String,
        expected: String,
        got: String,
    },

    #[error("trace index {index} out of range: context has {available} trace(s)")]
    TraceIndex { index: usize, available: usize },

    #[error("trace {index} is not suitable for {operation}: {reason}")]
    TraceUnsuitable {
        index: usize,
        operation: String,
        reason: String,
    },

    #[error("context hypotheses have not been verified; refusing to compute")]
    HypothesesNotVerified,

    #[error("hypothesis check failed: {summary}")]
    HypothesisViolation { summary: String },

    #[error("{0}")]
    Unsupported(String),
}
