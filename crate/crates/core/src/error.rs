use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coin state is not normalized: squared norm {norm_sqr} (tolerance {tolerance:e})")]
    NotNormalized { norm_sqr: f64, tolerance: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("brute-force oracle limited to t <= {max}, got t = {t}")]
    OracleTooLarge { t: usize, max: usize },

    #[error("beta = {beta} gives a trivial walk (beta must avoid 0 and pi/2)")]
    TrivialCoin { beta: f64 },

    #[error("position |x| = {x} exceeds the anti-aliasing limit {limit} for this grid")]
    Aliasing { x: i64, limit: i64 },

    #[error("invalid quadrature configuration: {0}")]
    InvalidQuadrature(String),

    #[error("order {order} out of range (maximum {max})")]
    InvalidOrder { order: usize, max: usize },

    #[error("density is singular at y = {y}")]
    Singularity { y: f64 },

    #[error("weak-limit formulas only cover the Hadamard coin (beta = pi/4), got beta = {beta}")]
    UnsupportedCoin { beta: f64 },

    #[error("invalid samples: {0}")]
    InvalidSamples(String),

    #[error("position {x} lies outside the light cone |x| <= {t}")]
    OutsideLightCone { x: i64, t: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),
}
