use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("negative discriminant delta = {delta} (complex kernel parameters are not supported)")]
    NegativeDelta { delta: f64 },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("hypergeometric series has a pole: c = {c} is zero or a negative integer")]
    HypergeometricPole { c: f64 },

    #[error("series did not converge after {terms} terms (tail bound {tail:e})")]
    NonConvergence { terms: usize, tail: f64 },

    #[error("point (t={t}, x={x}, b={b}, y={y}) lies outside the backward light cone")]
    OutOfDomain { t: f64, x: f64, b: f64, y: f64 },

    #[error("quadrature did not reach tolerance {tol:e} (estimated error {estimate:e})")]
    Quadrature { tol: f64, estimate: f64 },

    #[error("no blow-up prediction for p = {p} (admissible range is 1 < p <= {upper})")]
    NoPrediction { p: f64, upper: f64 },

    #[error("at grid node (t={t}, x={x}): {source}")]
    AtNode {
        t: f64,
        x: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and positive",
        })
    }
}

pub(crate) fn nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and nonnegative",
        })
    }
}
