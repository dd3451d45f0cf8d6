use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("enumeration of {requested} function tables exceeds the cap of {cap}")]
    EnumerationCap { requested: String, cap: usize },

    #[error("value out of range: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("conditional undefined: evidence X={x}, Y={y} has probability zero")]
    UndefinedConditional { x: usize, y: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("extraction impossible: amplitude at input {x} is zero")]
    ExtractionImpossible { x: usize },

    #[error("measured values are inconsistent with any distribution (residual {residual:.3e})")]
    Inconsistent { residual: f64 },

    #[error("constraint system is infeasible (phase-one residual {residual})")]
    Infeasible {
        residual: String,
        /// Multipliers y with yᵀA ≤ 0 componentwise and yᵀb > 0.
        certificate: Vec<String>,
    },

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}
