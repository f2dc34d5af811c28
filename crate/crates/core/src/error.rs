use alloc::string::String;

/// Errors reported by the algebra, the graph constructions and the solvers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("modulus 2^{0} is out of range (1..=64)")]
    InvalidModulus(u32),
    #[error("operands carry different moduli")]
    ModulusMismatch,
    #[error("series division precondition violated: {0}")]
    SeriesDivision(&'static str),
    #[error("matrix dimension {0} is odd")]
    OddDimension(usize),
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("indices must be distinct, got {0} twice")]
    RepeatedIndex(usize),
    #[error("instance of size {size} exceeds the enumeration cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid terminals: {0}")]
    InvalidTerminals(String),
    #[error("edge {0}-{1} joins two terminals; subdivide first")]
    TerminalEdge(usize, usize),
    #[error("not a perfect matching of the Gallai graph: {0}")]
    NotPerfectMatching(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("enumeration budget exceeded ({0})")]
    BudgetExceeded(&'static str),
    #[error("no perfect packing exists")]
    Infeasible,
    #[error("optimum is not unique or the instance is infeasible")]
    NotUniqueOrInfeasible,
    #[error("no trial produced a valid packing after {0} attempts")]
    FailureBudgetExhausted(usize),
    #[error("randomized solving requires uniform edge weights")]
    WeightsNotUniform,
}

pub type Result<T> = core::result::Result<T, Error>;
