use thiserror::Error;

/// Errors raised by the library.
///
/// Parameter-domain problems (`AlphaOutOfRange`, `SigmaNegative`, ...) are
/// distinguished from runtime numeric failures so the CLI can map them to
/// different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alpha out of range: {0} (need 0 < alpha < 2)")]
    AlphaOutOfRange(f64),
    #[error("sigma negative: {0}")]
    SigmaNegative(f64),
    #[error("beta out of range: {0} (need -1 <= beta <= 1)")]
    BetaOutOfRange(f64),
    #[error("invalid discrete law: {0}")]
    InvalidDiscreteLaw(String),
    #[error("invalid empirical distribution: {0}")]
    InvalidEmpirical(String),
    #[error("samples have unequal sizes: {0} vs {1}")]
    UnequalSizes(usize, usize),
    #[error("truncation level must be positive, got {0}")]
    NonPositiveThreshold(f64),
    #[error("oracle instance too large: {0} x {1} atoms (limit {2} per side)")]
    OracleTooLarge(usize, usize, usize),
    #[error("quantile function is not monotone on the grid near u = {0}")]
    NonMonotoneQuantile(f64),
    #[error("invalid pair model: {0}")]
    InvalidModel(String),
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
    #[error("centering unavailable: {0}")]
    CenteringUnavailable(String),
    #[error("empty threshold grid")]
    EmptyGrid,
    #[error("count must be at least 1")]
    EmptyCount,
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for errors caused by out-of-domain inputs rather than runtime
    /// numeric trouble.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Numeric(_))
    }
}
