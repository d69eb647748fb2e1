use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid base {0}: must be in 2..=255")]
    InvalidBase(u32),

    #[error("value {value} does not fit in {precision} digits of base {base}")]
    OutOfRange { value: u64, base: u8, precision: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("prime base required, got {0}")]
    PrimeBaseRequired(u8),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid weight rule: {0}")]
    WeightRule(String),

    #[error("enumeration would exceed cap of {cap} elements; use the analytic bound instead")]
    EnumerationCap { cap: u64 },

    #[error("enumeration infeasible: {0}")]
    Infeasible(String),

    #[error("matrix file line {line}: {message}")]
    MatrixFormat { line: usize, message: String },

    #[error("unsupported regime: {0}")]
    Regime(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
