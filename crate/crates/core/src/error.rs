use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("product would raise log t0 to a power above 1")]
    LogOverflow,
    #[error("cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(u32, u32),
    #[error("cutoff must be at least 1")]
    ZeroCutoff,
    #[error("index must be at least 1")]
    ZeroIndex,
    #[error("exponential not representable in the exact ring: {0}")]
    ExpDomain(String),
    #[error("t0 must be positive, got {0}")]
    NonPositiveT0(f64),
    #[error("moment t_{0} is required but was not supplied")]
    MissingMoment(u32),
    #[error("parts sum to {got}, expected {expected}")]
    PartSum { expected: u32, got: u32 },
    #[error("invalid tower key: {0}")]
    InvalidTowerKey(String),
    #[error("missing Cauchy datum d0^{ell} d_{s} v")]
    MissingCauchyDatum { ell: u32, s: u32 },
    #[error("order {order} exceeds the exactness window (max {max} at cutoff {cutoff})")]
    WindowExceeded { order: u32, max: u32, cutoff: u32 },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("numeric overflow while evaluating {0}")]
    Overflow(&'static str),
}
