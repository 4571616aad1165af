use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid dimensions differ ({left} vs {right})")]
    GridMismatch { left: usize, right: usize },
    #[error("function has no finite node")]
    AllInfinite,
    #[error("effective domain of the combined conjugate is empty")]
    EmptyEffectiveDomain,
    #[error("level {s} exceeds the maximum {max} of the function")]
    EmptyLevel { s: f64, max: f64 },
    #[error("origin is not an interior point of the body")]
    OriginNotInterior,
    #[error("origin is not an interior point of the effective domain")]
    OriginNotInteriorDomain,
    #[error("Wulff samples must be strictly positive")]
    NonPositiveSamples,
    #[error("weight evaluated to {value} at {x:?}")]
    NonPositiveWeight { x: Vec<f64>, value: f64 },
    #[error("weight rejected: {0}")]
    WeightRejected(String),
    #[error("truncation unreliable: tail fraction {fraction:.3e} exceeds {limit:.1e}")]
    TruncationUnreliable { fraction: f64, limit: f64 },
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("function has unbounded support")]
    UnboundedSupport,
    #[error("perturbation must have compact support")]
    NonCompactPerturbation,
    #[error("Wulff family degenerates: h_K + t g <= 0 at t = {t}")]
    WulffDegenerate { t: f64 },
    #[error("target measure is concentrated on a proper subspace")]
    RankDeficient,
    #[error("target measure or weight is not even: {0}")]
    NotEven(String),
    #[error("solvability condition unverified: {0}")]
    ConditionUnverified(String),
    #[error("line search stalled after {iterations} iterations (residual {residual:.3e})")]
    NoProgress { iterations: usize, residual: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
