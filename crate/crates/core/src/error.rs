use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QklError {
    #[error("pole: {0}")]
    Pole(String),
    #[error("denominator parameter hits a pole at index {index} before the series terminates")]
    DenominatorPole { index: usize },
    #[error("very-well-poised series with a = 1")]
    VwPole,
    #[error("divergence: {0}")]
    Divergence(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("value should be real but has imaginary part {im:e} against real part {re:e}")]
    Reality { re: f64, im: f64 },
    #[error("degree {n} exceeds N = {big_n}")]
    Degree { n: usize, big_n: usize },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("quadrature did not converge: error estimate {estimate:e} exceeds {tol:e}")]
    Convergence { estimate: f64, tol: f64 },
}

impl QklError {
    /// Name of the error class as it appears in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            QklError::Pole(_) | QklError::DenominatorPole { .. } | QklError::VwPole => "PoleError",
            QklError::Divergence(_) => "DivergenceError",
            QklError::Domain(_) => "DomainError",
            QklError::Range(_) => "RangeError",
            QklError::Reality { .. } => "RealityError",
            QklError::Degree { .. } => "DegreeError",
            QklError::Param(_) => "ParamError",
            QklError::Hypothesis(_) => "HypothesisError",
            QklError::Convergence { .. } => "ConvergenceError",
        }
    }

    /// True for the errors that signal a series or integral leaving its
    /// region of convergence, as opposed to bad input.
    pub fn is_divergence(&self) -> bool {
        matches!(self, QklError::Divergence(_) | QklError::Convergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, QklError>;
