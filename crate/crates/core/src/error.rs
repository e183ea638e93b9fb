use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus is reducible")]
    Reducible,
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("generator matrix is not basic (maximal minors share a factor)")]
    NotBasic,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("parameters lie outside the family's parameter space")]
    OutsideParameterSpace,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("base code is not MDS")]
    BaseNotMds,
    #[error("extension hypothesis failed: {0}")]
    HypothesisFailed(&'static str),
    #[error("leading coefficient F2 of the new column is zero")]
    F2Zero,
    #[error("degenerate evaluation point: {0}")]
    DegeneratePoint(String),
}

impl Error {
    /// Attaches a line number to a parse error raised without one.
    pub fn at_line(self, line: usize) -> Error {
        match self {
            Error::Parse { line: 0, msg } => Error::Parse { line, msg },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
