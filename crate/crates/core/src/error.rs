use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("jet structure mismatch: {0}")]
    JetMismatch(String),

    #[error("coefficient field supports jets up to order {available}, but order {requested} is required")]
    JetOrderUnavailable { requested: usize, available: usize },

    #[error("amplitude exponent nu = {0} must be greater than -1")]
    Regime(f64),

    #[error("oscillator frequency must be positive and finite, got {0}")]
    InvalidFrequency(f64),

    #[error("oscillator has no non-zero Fourier coefficient")]
    DegenerateOscillator,

    #[error("oscillator has non-zero mean {0}; remove the mean before integrating")]
    NonZeroMean(Complex64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite contribution from word {word} at t = {t}")]
    NonFinite { word: String, t: f64 },

    #[error("step {index} failed: {source}")]
    StepFailed { index: usize, source: Box<Error> },

    #[error("quadrature did not converge: error estimate {estimate:e} exceeds tolerance {tol:e}")]
    Quadrature { estimate: f64, tol: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("micro step {dt} does not resolve the oscillation (need dt <= {max})")]
    Resolution { dt: f64, max: f64 },
}
