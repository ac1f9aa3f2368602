use serde::Serialize;

use crate::constants::HBAR;
use crate::error::{require_non_negative, Error, Result};
use crate::model::covariance::{covariance, CovarianceMatrix};
use crate::model::environment::EnvironmentSpec;
use crate::model::probe::ProbeSpec;
use crate::model::state::StatePoint;

/// Slack allowed below det = 1 before a covariance is called unphysical.
pub const DET_TOLERANCE: f64 = 1e-9;

pub(crate) fn require_time(t: f64) -> Result<f64> {
    require_non_negative("t", t)
}

/// μ⁻² = 1 + e together with the analytic first derivatives of e.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PurityBracket {
    pub excess: f64,
    pub d_gamma: f64,
    /// Per unit Λ, m²·s.
    pub d_lambda: f64,
    /// s⁻¹
    pub d_time: f64,
}

impl PurityBracket {
    pub fn value(&self) -> f64 {
        1.0 + self.excess
    }

    pub fn purity(&self) -> f64 {
        self.value().sqrt().recip()
    }

    /// ∂μ from the derivative of the bracket: −½(1 + e)^{−3/2}·∂e.
    pub fn purity_derivative(&self, d_excess: f64) -> f64 {
        -0.5 * d_excess / (self.value() * self.value().sqrt())
    }
}

pub fn purity_bracket(probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<PurityBracket> {
    require_time(t)?;
    let pt = StatePoint::<f64>::new(probe, env.lambda(), t);
    Ok(PurityBracket {
        excess: pt.purity_excess(),
        d_gamma: pt.excess_d_gamma(),
        d_lambda: pt.excess_d_lambda(),
        d_time: pt.excess_d_time(),
    })
}

/// Tr ρ², from the closed-form bracket.
pub fn purity_exact(probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<f64> {
    require_time(t)?;
    let e = StatePoint::<f64>::new(probe, env.lambda(), t).purity_excess();
    Ok((1.0 + e).sqrt().recip())
}

/// Leading-order purity, [1 + (4ħΛ(γ²+1)/(3τ0m))·t³]^{−1/2}.
pub fn purity_approx(probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<f64> {
    require_time(t)?;
    let g = probe.gamma();
    let k = 4.0 * HBAR * env.lambda() * (g * g + 1.0) / (3.0 * probe.tau0() * probe.mass());
    Ok((1.0 + k * t * t * t).sqrt().recip())
}

pub fn purity_from_covariance(cov: &CovarianceMatrix) -> Result<f64> {
    let det = cov.det();
    if !(det >= 1.0 - DET_TOLERANCE) {
        return Err(Error::UnphysicalCovariance { det });
    }
    Ok(det.sqrt().recip().min(1.0))
}

/// Variance of the position density at time t, m².
pub fn position_density_variance(probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<f64> {
    let c = covariance(probe, env, t)?;
    Ok(probe.sigma0().powi(2) * c.sxx() / 2.0)
}
