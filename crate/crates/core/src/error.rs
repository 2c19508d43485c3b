use thiserror::Error;

/// Errors raised by the engine.
///
/// `InsufficientTruncation` is recoverable: the caller retries with deeper
/// series. Everything tagged as an engine bug signals a broken invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("insufficient truncation: coefficient of z^{needed} requested but series is only known below z^{available}")]
    InsufficientTruncation { needed: i64, available: i64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("series is identically zero")]
    ZeroSeries,
    #[error("exact series {0} has an infinite expansion; truncate it first")]
    NeedsTruncation(&'static str),
    #[error("series reversion needs a nonzero linear coefficient and zero constant term")]
    VanishingLinearTerm,
    #[error("composition needs an inner series with positive valuation: {0}")]
    BadComposition(&'static str),
    #[error("series has a z^-1 term, so its primitive is not a Laurent series")]
    LogarithmicPrimitive,
    #[error("square root needs a series with constant term 1")]
    NonUnitSquareRoot,
    #[error("degenerate framing: f must avoid 0 and -1")]
    DegenerateFraming,
    #[error("truncation must be at least {min}, got {got}")]
    TruncationTooSmall { min: i64, got: i64 },
    #[error("engine bug: pole form has a nonzero simple pole ({0})")]
    ResidueObstruction(String),
    #[error("engine bug: pole form is outside the zeta span ({0})")]
    OutsideZetaSpan(String),
    #[error("engine bug: amplitude W_{g}({h} points) is not symmetric at {detail}")]
    SymmetryViolation { g: u32, h: u32, detail: String },
    #[error("engine bug: amplitude W_{g}({h} points) violates the dimension bound at {detail}")]
    DimensionBound { g: u32, h: u32, detail: String },
    #[error("unstable amplitude (g={g}, h={h}) cannot be produced by the recursion")]
    Unstable { g: u32, h: u32 },
    #[error("outside the supported range: {0}")]
    OutOfScope(String),
    #[error("partition length {got} does not match amplitude arity {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("size mismatch: |R| = {tableau} but |mu| = {partition}")]
    SizeMismatch { tableau: u32, partition: u32 },
    #[error("genus/partition combination has negative branch-point count")]
    NegativeBranchCount,
    #[error("requested coefficient lies outside the series bounds ({0})")]
    BoundOverflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache file does not match the curve: {0}")]
    CacheMismatch(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl Error {
    /// True for failures that indicate an internal invariant was broken.
    pub fn is_engine_bug(&self) -> bool {
        matches!(
            self,
            Error::ResidueObstruction(_)
                | Error::OutsideZetaSpan(_)
                | Error::SymmetryViolation { .. }
                | Error::DimensionBound { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
