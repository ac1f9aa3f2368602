use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("kernel undefined at t=0 (got t = {t:e} s)")]
    KernelUndefinedAtZero { t: f64 },

    #[error("unphysical covariance: det = {det} < 1")]
    UnphysicalCovariance { det: f64 },

    #[error("correlation magnitude must be < 1 (got r = {r})")]
    CorrelationOutOfRange { r: f64 },

    #[error("pure-state limit: purity is 1 but its derivative is {derivative:e}")]
    PureStateLimit { derivative: f64 },

    #[error("derivative failed to converge: estimate {estimate:e}, Richardson spread {spread:e}")]
    DerivativeNotConverged { estimate: f64, spread: f64 },

    #[error("quadrature tolerance not met: error estimate {error_estimate:e}")]
    QuadratureTolerance { error_estimate: f64 },

    #[error("non-informative: Fisher information is zero")]
    NonInformative,

    #[error("no interior maximum: relative purity rate peaks at domain edge t = {t_edge:e} s")]
    NoInteriorMaximum { t_edge: f64 },

    #[error("row gamma = {gamma}: {source}")]
    Row { gamma: f64, source: Box<Error> },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical procedure, as opposed to rejected input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::DerivativeNotConverged { .. }
            | Error::QuadratureTolerance { .. }
            | Error::NoInteriorMaximum { .. }
            | Error::PureStateLimit { .. }
            | Error::UnphysicalCovariance { .. } => true,
            Error::Row { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be finite, got {value}")))
    }
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be > 0, got {value}")))
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be >= 0, got {value}")))
    }
}
