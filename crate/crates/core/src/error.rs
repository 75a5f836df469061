use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared generator `{name}` at line {line}, column {column}")]
    UndeclaredGenerator {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("prime {0} is not supported: only odd primes are accepted")]
    EvenPrime(u64),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("no binding for generator {0}")]
    MissingBinding(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("structurally invalid pc-presentation: {0}")]
    Structural(String),
    #[error("inconsistent pc-presentation: {0}")]
    Inconsistent(String),
    #[error("element has infinite order")]
    InfiniteOrder,
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("uncertified result: {0}")]
    Uncertified(String),
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("group is not of maximal class (coclass {coclass})")]
    NotMaximalClass { coclass: u32 },
    #[error("class bound {got} is incompatible with {identity}: {reason}")]
    IncompatibleClass {
        identity: String,
        got: usize,
        reason: String,
    },
    #[error("group order {order} exceeds the cap {cap}")]
    OrderAboveCap { order: u128, cap: u128 },
    #[error("{0}")]
    NotApplicable(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
