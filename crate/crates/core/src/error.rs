use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid oscillator parameters: {0}")]
    InvalidParams(String),

    #[error("matrix is not symplectic: |det - 1| = {0:e}")]
    NotSymplectic(f64),

    #[error("matrix is not a valid covariance matrix: {0}")]
    InvalidCovariance(String),

    /// The relative covariance matrix has complex eigenvalues.
    #[error("degenerate spectrum: discriminant {discriminant:e} is negative beyond tolerance")]
    DegenerateSpectrum { discriminant: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// Leading-order enumeration would produce too many terms.
    #[error("{count} insertions exceed the enumeration budget of {limit}")]
    ComplexityBudget { count: usize, limit: usize },

    /// The extended-precision pipeline could not certify six significant digits.
    #[error("precision exhausted at t = {t}: log rho = {low:e} vs {high:e} at wider precision")]
    PrecisionExhausted { t: f64, low: f64, high: f64 },

    #[error("unknown figure {0}; available: 3, 4, 5, 7, 8, 9")]
    UnknownFigure(u32),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
