use thiserror::Error;

/// Errors raised by the spectral computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The operator is assumed injective, so every atom must sit at a
    /// strictly positive eigenvalue.
    #[error("eigenvalue {0} is not positive: the operator is assumed injective, so the spectral measure carries no mass at zero")]
    NonPositiveEigenvalue(f64),

    #[error("non-finite value {value} in {what}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("the spectrum is empty")]
    EmptySpectrum,

    #[error("the element is zero")]
    ZeroElement,

    #[error("step size {sigma} violates sigma * lambda_max <= 1 (lambda_max = {lambda_max})")]
    StepSizeTooLarge { sigma: f64, lambda_max: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("noise norm {norm} exceeds the noise level {delta}")]
    NoiseTooLarge { norm: f64, delta: f64 },

    #[error("no root found: {0}")]
    NoRoot(&'static str),

    #[error("iteration cap {cap} exceeded before the discrepancy criterion was met")]
    CapExceeded { cap: u64 },

    #[error("{0}")]
    Fit(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_nonneg(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite { what: name, value });
    }
    if value < 0.0 {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be nonnegative",
        });
    }
    Ok(())
}

pub(crate) fn check_pos(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite { what: name, value });
    }
    if value <= 0.0 {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive",
        });
    }
    Ok(())
}
