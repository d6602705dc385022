use thiserror::Error;

/// Errors shared across the arithmetic, tree, torus, group-ring and
/// fitting layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by a non-unit (divisor has positive valuation)")]
    NonUnitDivision,
    #[error("certified precision would reach 0")]
    PrecisionUnderflow,
    #[error("guard digits cannot absorb the series losses")]
    InsufficientGuard,
    #[error("residue is not a unit")]
    NonUnitResidue,
    #[error("reference ray depth too small: need T >= {needed}, got {got}")]
    DepthTooSmall { needed: i64, got: i64 },
    #[error("group-ring level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("ring descriptor mismatch")]
    RingMismatch,
    #[error("quotient modulus is not a monic divisor of t^(p^n)-1")]
    NonCanonicalModulus,
    #[error("pi-valuation offset outside the configured window")]
    ValuationWindowExceeded,
    #[error("table form queried beyond its declared radius {0}")]
    FormRadiusExceeded(u32),
    #[error("supplied maps do not form an exact sequence: {0}")]
    NotExact(String),
    #[error("presentation too large: minor expansion capped at {cap} generators, got {got}")]
    TooManyGenerators { cap: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
