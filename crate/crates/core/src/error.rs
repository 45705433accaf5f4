use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at {0}")]
    GammaPole(f64),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("off-diagonal coefficient b_{index} vanishes")]
    ZeroCoefficient { index: usize },

    #[error("initial value alpha must be a nonzero finite number")]
    ZeroAlpha,

    #[error("recursion magnitude exceeded the overflow guard at n = {0}")]
    Overflow(usize),

    #[error("hypergeometric series: {0}")]
    Hypergeometric(String),

    #[error("eigenvalues {0} and {1} are not simple")]
    Degenerate(usize, usize),

    #[error("invalid system parameters: {0}")]
    InvalidClass(String),

    #[error("continued fraction hit a near-zero denominator at level {level}")]
    PoleProximity { level: usize },

    #[error("Green's function evaluation paths disagree (relative difference {0:e})")]
    PathDisagreement(f64),

    #[error("negative spectral weight {value:e} at z = {z}")]
    NegativeWeight { z: f64, value: f64 },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("unsupported for this system: {0}")]
    Unsupported(String),

    #[error("bracket failure: {0}")]
    Bracket(String),
}

pub type Result<T> = std::result::Result<T, Error>;
