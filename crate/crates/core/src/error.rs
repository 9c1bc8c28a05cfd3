use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lambda value {0} lies outside [0, 1]")]
    LambdaOutOfRange(String),

    #[error("expression is not a polynomial: {0}")]
    NonPolynomial(String),

    #[error("invalid backend: {0}")]
    InvalidBackend(String),

    #[error("operator still depends on the symbolic lambda")]
    SymbolicLambda,

    #[error("backends disagree on hbar ({0} vs {1})")]
    HbarMismatch(f64, f64),

    #[error("matrix is not Hermitian (max |M - M^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("mean value has a non-negligible imaginary part ({0:e})")]
    ComplexMean(f64),

    #[error("invalid phase-space density: {0}")]
    InvalidDensity(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("Liouville integration unstable at step {step}: mass drift {drift:e}")]
    Unstable { step: usize, drift: f64 },

    #[error("malformed data: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
