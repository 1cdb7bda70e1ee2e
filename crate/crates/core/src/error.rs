use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the dynamics engines, the oracle and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimer amplitudes vanish (|a|^2 + |b|^2 = {norm_sqr:e})")]
    ZeroVector { norm_sqr: f64 },

    #[error("dimer amplitudes are not normalized (|a|^2 + |b|^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid mode set: {0}")]
    InvalidModes(String),

    #[error("invalid frequency window: {0}")]
    InvalidWindow(String),

    #[error("invalid spectral model: {0}")]
    InvalidSpectralModel(String),

    #[error("matrix is not a density matrix: {0}")]
    NotADensityMatrix(String),

    #[error("reservoir basis degenerates (|s_J| = {s_abs}); first-order correction undefined")]
    DegenerateBasis { s_abs: f64 },

    #[error("quadrature on [{lo}, {hi}] did not reach tolerance (estimated error {error:e})")]
    QuadratureFailure { lo: f64, hi: f64, error: f64 },

    #[error("unsupported exponent q = {0}: closed form needs q > -1/2 or q = -1")]
    UnsupportedExponent(f64),

    #[error("special function failed to converge: {0}")]
    SpecialFunctionFailure(String),

    #[error("coupling function is not invertible near zero: {0}")]
    NonInvertibleCoupling(String),

    #[error("singular denominator: {0}")]
    SingularDenominator(String),

    #[error("outside the asymptotic regime: {0}")]
    Regime(String),

    #[error("truncated space dimension {dim} exceeds cap {cap}")]
    CapExceeded { dim: usize, cap: usize },

    #[error("eigendecomposition failed for a block of size {0}")]
    EigenFailure(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
