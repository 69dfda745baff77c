use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },

    #[error("variable index {index} at position {position} is outside 1..={mode_count}")]
    ModeIndex {
        index: usize,
        mode_count: usize,
        position: usize,
    },

    #[error("per-mode degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },

    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error(
        "cutoff {cutoff} is inadequate: dropped tail mass {tail_mass:e} exceeds {tolerance:e}; \
         minimal adequate cutoff is {minimal}"
    )]
    InadequateCutoff {
        cutoff: usize,
        tail_mass: f64,
        tolerance: f64,
        minimal: usize,
    },

    #[error("operation requires a single-mode state, got {0} modes")]
    SingleModeOnly(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid state literal `{literal}`: {reason}")]
    StateLiteral { literal: String, reason: String },

    #[error("state file: {0}")]
    StateJson(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
