use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgresError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid germ: {0}")]
    InvalidGerm(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("stabilization not reached up to quasi-degree {cap}")]
    Stabilization { cap: u32 },
    #[error("form is not closed: {0}")]
    NotClosed(String),
    #[error("form not in the span of the restriction basis at quasi-degree {0}")]
    NotInSpan(u32),
    #[error("vector field {label} is not tangent: {detail}")]
    NotTangent { label: String, detail: String },
    #[error("ruleset error: {0}")]
    Ruleset(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("verification mismatch: {0}")]
    Mismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl AlgresError {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        AlgresError::Parse { line, col, msg: msg.into() }
    }
}
