//! Quantum and classical Fisher information for γ and Λ.

pub mod cfi;
pub mod phi;
pub mod qfi;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{purity_bracket, EnvironmentSpec, ProbeSpec};

pub use cfi::{cfi_closed, cfi_quadrature, CfiOracles};
pub use phi::{phi, phi_gamma, phi_lambda, PhiCoefficients};
pub use qfi::{qfi_analytic, qfi_numeric, qfi_terms, QfiTerms, StepPolicy};

/// Parameter being estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimationTarget {
    Gamma,
    Lambda,
}

impl EstimationTarget {
    pub const ALL: [EstimationTarget; 2] = [EstimationTarget::Gamma, EstimationTarget::Lambda];

    pub fn name(self) -> &'static str {
        match self {
            EstimationTarget::Gamma => "gamma",
            EstimationTarget::Lambda => "lambda",
        }
    }

    /// Units of 1/F, for column headers.
    pub fn inverse_units(self) -> &'static str {
        match self {
            EstimationTarget::Gamma => "1",
            EstimationTarget::Lambda => "m^4 s^2",
        }
    }
}

impl fmt::Display for EstimationTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimationTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gamma" | "g" => Ok(EstimationTarget::Gamma),
            "lambda" | "l" => Ok(EstimationTarget::Lambda),
            other => Err(Error::invalid("target", format!("expected gamma or lambda, got `{other}`"))),
        }
    }
}

/// Every Fisher quantity at one point, from all routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FisherResult {
    pub target: EstimationTarget,
    pub qfi_analytic: f64,
    pub qfi_numeric: f64,
    pub cfi_closed: f64,
    pub cfi_quadrature: f64,
    pub cfi_gaussian_identity: f64,
    pub purity: f64,
    pub purity_derivative: f64,
}

pub fn fisher_result(
    target: EstimationTarget,
    probe: &ProbeSpec,
    env: &EnvironmentSpec,
    t: f64,
    policy: &StepPolicy,
) -> Result<FisherResult> {
    let bracket = purity_bracket(probe, env, t)?;
    let d_excess = match target {
        EstimationTarget::Gamma => bracket.d_gamma,
        EstimationTarget::Lambda => bracket.d_lambda,
    };
    let oracles = cfi_quadrature(target, probe, env, t)?;
    Ok(FisherResult {
        target,
        qfi_analytic: qfi_analytic(target, probe, env, t)?,
        qfi_numeric: qfi_numeric(target, probe, env, t, policy)?,
        cfi_closed: cfi_closed(target, probe, env, t)?,
        cfi_quadrature: oracles.quadrature,
        cfi_gaussian_identity: oracles.gaussian_identity,
        purity: bracket.purity(),
        purity_derivative: bracket.purity_derivative(d_excess),
    })
}

/// Smallest standard deviation 1/√(N·F) reachable with `n_repeats` shots.
pub fn cramer_rao_bound(fisher: f64, n_repeats: u64) -> Result<f64> {
    if !(fisher >= 0.0) || !fisher.is_finite() {
        return Err(Error::invalid("fisher", format!("must be finite and >= 0, got {fisher}")));
    }
    if n_repeats == 0 {
        return Err(Error::invalid("n_repeats", "must be at least 1"));
    }
    if fisher == 0.0 {
        return Err(Error::NonInformative);
    }
    Ok((n_repeats as f64 * fisher).sqrt().recip())
}
