use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(String),

    #[error("discount {0} outside (0, 1]")]
    InvalidDiscount(String),

    #[error("discount exceeds 1 (sequence index {0} must be at least 3)")]
    SequenceIndex(u32),

    #[error("truncation level must be at least 1")]
    InvalidTruncation,

    #[error("closed form denominator vanishes for (i, i') = ({0}, {1})")]
    ZeroDenominator(u8, u8),

    #[error("payoff recursion is singular")]
    SingularSystem,

    #[error("Monte Carlo requires discount >= 0.05, got {0}")]
    DiscountTooSmallForMonteCarlo(f64),

    #[error("strategy has no action for {0}")]
    StrategyNotTotal(String),

    #[error("non-finite value during {0}")]
    NonFinite(&'static str),

    #[error("point {0} is a kink of the interpolated solution")]
    KinkPoint(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid solver parameter: {0}")]
    InvalidParameter(String),

    #[error("no convergence after {iterations} iterations (last update {last_update:e})")]
    MaxIterations { iterations: usize, last_update: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
