use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid base {0}: base must be at least 2")]
    InvalidBase(u64),

    #[error("base {0} must be odd and at least 3")]
    OddBaseRequired(u32),

    #[error("digit {digit} at position {position} is out of range for base {base}")]
    DigitOutOfRange {
        position: usize,
        digit: i64,
        base: u32,
    },

    #[error("{component} digit at position {position} has the wrong sign")]
    MixedSigns {
        position: usize,
        component: &'static str,
    },

    #[error("most significant digit pair is (0, 0)")]
    LeadingZeroPair,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("no value found within norm limit {limit}")]
    NotFoundWithinLimit { limit: u64 },

    #[error("no sequence found within bound {bound}")]
    NotFoundWithinBound { bound: u64 },

    #[error("no such sequence exists: {0}")]
    Obstructed(String),

    #[error("low zero run has {available} positions but {needed} are required")]
    RleOverlap { needed: u64, available: String },

    #[error("low-order summand must have nonnegative components")]
    NegativeSummand,

    #[error("numeral with {positions} positions is too large to materialize")]
    TooLargeToMaterialize { positions: String },

    #[error("rational step d = {supplied} but gcd(2, B - 1) = {expected}")]
    WrongStep { supplied: u64, expected: u64 },

    #[error("supplied run length {supplied} is shorter than the required {required}")]
    RunTooShort { supplied: u64, required: u64 },

    #[error("term {index} of the supplied rational run ({value}) is not happy")]
    UnhappyTerm { index: u64, value: String },

    #[error("invariant violated: {0}")]
    Invariant(String),
}
