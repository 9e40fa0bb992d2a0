use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operation needs a nonempty word")]
    EmptyWord,
    #[error("period word is empty")]
    EmptyPeriod,
    #[error("symbol {symbol} outside alphabet of size {k}")]
    SymbolOutOfRange { symbol: u32, k: u32 },
    #[error("cannot parse string: {0}")]
    Parse(String),
    #[error("point {0} is a breakpoint of the partition")]
    SingularPoint(f64),
    #[error("orbit hits a breakpoint at step {0}")]
    SingularOrbit(usize),
    #[error("point {0} lies outside the open unit interval")]
    OutOfDomain(f64),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("condition violated: {0}")]
    ConditionViolation(String),
    #[error("root not bracketed: {0}")]
    BracketFailure(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("algebraic number error: {0}")]
    Algebraic(String),
}
