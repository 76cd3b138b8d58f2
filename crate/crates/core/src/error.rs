use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("division by zero in GF(2^{degree})")]
    DivisionByZero { degree: u32 },
    #[error("algebra dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("gate {gate}: {msg}")]
    InvalidGate { gate: u64, msg: String },
    #[error("cycle detected through gate {gate}")]
    Cycle { gate: u64 },
    #[error("no binding for variable `{0}`")]
    MissingBinding(String),
    #[error("expansion too large: more than {cap} monomials")]
    ExpansionTooLarge { cap: usize },
    #[error("circuit is not tree-like: gate {gate} has fan-out {fan_out}")]
    NotTreeLike { gate: usize, fan_out: usize },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("input format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
