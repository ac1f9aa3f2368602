//! Scattering constant ↔ temperature, purity-rate maximum and the temporal
//! gain of information.

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{FULLERENE, HBAR, K_BOLTZMANN};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::fisher::{qfi_analytic, EstimationTarget};
use crate::model::{purity_bracket, purity_exact, EnvironmentSpec, ProbeSpec};
use crate::numeric::{golden_section_max, logspace};

/// Background gas responsible for the scattering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringGas {
    /// kg
    pub m_air: f64,
    /// m⁻³
    pub number_density: f64,
    /// Size of the probe molecule, m.
    pub molecule_size: f64,
}

impl ScatteringGas {
    pub fn new(m_air: f64, number_density: f64, molecule_size: f64) -> Result<Self> {
        Ok(ScatteringGas {
            m_air: require_positive("m_air", m_air)?,
            number_density: require_positive("number_density", number_density)?,
            molecule_size: require_positive("molecule_size", molecule_size)?,
        })
    }

    /// Dilute air around a fullerene beam.
    pub fn fullerene_background() -> Self {
        ScatteringGas {
            m_air: FULLERENE.m_air,
            number_density: FULLERENE.number_density,
            molecule_size: FULLERENE.molecule_size,
        }
    }

    pub fn with_number_density(self, number_density: f64) -> Result<Self> {
        ScatteringGas::new(self.m_air, number_density, self.molecule_size)
    }

    /// Λ / T^{3/2}
    fn prefactor(&self) -> f64 {
        8.0 / (3.0 * HBAR * HBAR)
            * (2.0 * std::f64::consts::PI * self.m_air).sqrt()
            * K_BOLTZMANN.powf(1.5)
            * self.number_density
            * self.molecule_size
            * self.molecule_size
    }
}

/// Λ = (8/3ħ²)·√(2π m_air)·(k_B T)^{3/2}·N·w².
pub fn lambda_from_temperature(temperature: f64, gas: &ScatteringGas) -> Result<f64> {
    require_non_negative("temperature", temperature)?;
    Ok(gas.prefactor() * temperature.powf(1.5))
}

pub fn temperature_from_lambda(lambda: f64, gas: &ScatteringGas) -> Result<f64> {
    require_non_negative("lambda", lambda)?;
    Ok((lambda / gas.prefactor()).powf(2.0 / 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoherenceTime {
    Finite(f64),
    /// Λ = 0: coherence is never lost.
    Infinite,
}

impl DecoherenceTime {
    pub fn seconds(&self) -> f64 {
        match *self {
            DecoherenceTime::Finite(s) => s,
            DecoherenceTime::Infinite => f64::INFINITY,
        }
    }
}

/// 1/(Λ·Δx²).
pub fn decoherence_time(lambda: f64, delta_x: f64) -> Result<DecoherenceTime> {
    require_non_negative("lambda", lambda)?;
    require_positive("delta_x", delta_x)?;
    if lambda == 0.0 {
        return Ok(DecoherenceTime::Infinite);
    }
    Ok(DecoherenceTime::Finite(1.0 / (lambda * delta_x * delta_x)))
}

/// (1/μ)|∂μ/∂t| = ½|∂_t e|/(1 + e), s⁻¹.
pub fn relative_purity_rate(probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<f64> {
    require_positive("t", t)?;
    let b = purity_bracket(probe, env, t)?;
    Ok(0.5 * b.d_time.abs() / b.value())
}

/// Search window for the purity-rate maximum, s.
pub const TAU_MAX_DOMAIN: (f64, f64) = (1e-9, 1e-2);
const SCAN_POINTS: usize = 200;
const TAU_MAX_REL_TOL: f64 = 1e-6;

/// Interaction time maximizing the relative purity rate.
pub fn tau_max_exact(probe: &ProbeSpec, env: &EnvironmentSpec) -> Result<f64> {
    require_positive("lambda", env.lambda())?;
    let (lo, hi) = TAU_MAX_DOMAIN;
    let rate = |log_t: f64| relative_purity_rate(probe, env, log_t.exp()).unwrap_or(f64::NAN);

    let grid = logspace(lo, hi, SCAN_POINTS);
    let mut best = 0;
    let mut best_rate = f64::NEG_INFINITY;
    for (i, &t) in grid.iter().enumerate() {
        let r = relative_purity_rate(probe, env, t)?;
        if r > best_rate {
            best_rate = r;
            best = i;
        }
    }
    if best == 0 || best == SCAN_POINTS - 1 {
        return Err(Error::NoInteriorMaximum { t_edge: grid[best] });
    }

    // A bracket of width δ in ln t is a relative tolerance of ~δ on t.
    let found = golden_section_max(rate, grid[best - 1].ln(), grid[best + 1].ln(), TAU_MAX_REL_TOL);
    Ok(found.x.exp())
}

/// [3τ0²/(2(1+γ²)Λσ0²)]^{1/3}
pub fn tau_max_approx(probe: &ProbeSpec, env: &EnvironmentSpec) -> Result<f64> {
    let lambda = require_positive("lambda", env.lambda())?;
    let g = probe.gamma();
    let tau0 = probe.tau0();
    Ok((3.0 * tau0 * tau0 / (2.0 * (1.0 + g * g) * lambda * probe.sigma0().powi(2))).cbrt())
}

fn tgi_from_times(tau: f64, tau_ref: f64) -> f64 {
    -10.0 * (tau / tau_ref).log10()
}

/// −10·log10[τ_max(γ)/τ_max(0)], dB.
pub fn tgi(probe: &ProbeSpec, env: &EnvironmentSpec) -> Result<f64> {
    let tau = tau_max_exact(probe, env)?;
    let tau_ref = tau_max_exact(&probe.with_gamma(0.0)?, env)?;
    Ok(tgi_from_times(tau, tau_ref))
}

/// (10/3)·log10(1 + γ²), dB.
pub fn tgi_approx(gamma: f64) -> f64 {
    10.0 / 3.0 * (1.0 + gamma * gamma).log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TgiRow {
    pub gamma: f64,
    /// s
    pub tau_max: f64,
    pub purity_at_tau_max: f64,
    /// s⁻¹
    pub relative_purity_rate: f64,
    pub lambda_sq_qfi: f64,
    pub tgi_db: f64,
}

/// Correlations tabulated by default.
pub const TABLE1_GAMMAS: [f64; 7] = [-50.0, -25.0, -1.0, 0.0, 35.0, 70.0, 150.0];

/// Reference row values at Λ = 1e15 m⁻²s⁻¹ for the fullerene scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceRow {
    pub gamma: f64,
    /// μs
    pub tau_max_us: f64,
    pub purity_at_tau_max: f64,
    pub relative_purity_rate: f64,
    pub lambda_sq_qfi: f64,
    pub tgi_db: f64,
}

const fn reference(gamma: f64, tau_max_us: f64, rate: f64, lambda_sq_qfi: f64, tgi_db: f64) -> ReferenceRow {
    ReferenceRow {
        gamma,
        tau_max_us,
        purity_at_tau_max: 0.563,
        relative_purity_rate: rate,
        lambda_sq_qfi,
        tgi_db,
    }
}

pub const TABLE1_REFERENCE: [ReferenceRow; 7] = [
    reference(-50.0, 17.1, 58488.0, 0.246, 11.28),
    reference(-25.0, 27.2, 36861.0, 0.247, 9.24),
    reference(-1.0, 183.2, 5472.0, 0.247, 0.97),
    reference(0.0, 228.4, 4377.0, 0.247, 0.0),
    reference(35.0, 21.7, 46117.0, 0.247, 10.22),
    reference(70.0, 13.7, 73191.0, 0.248, 12.23),
    reference(150.0, 8.2, 121646.0, 0.247, 14.45),
];

pub const TABLE1_LAMBDA: f64 = 1e15;

pub fn reference_row(gamma: f64) -> Option<&'static ReferenceRow> {
    TABLE1_REFERENCE.iter().find(|r| r.gamma == gamma)
}

fn table_row(probe: &ProbeSpec, env: &EnvironmentSpec, gamma: f64, tau_ref: f64) -> Result<TgiRow> {
    let p = probe.with_gamma(gamma)?;
    let tau = tau_max_exact(&p, env)?;
    let lambda = env.lambda();
    Ok(TgiRow {
        gamma,
        tau_max: tau,
        purity_at_tau_max: purity_exact(&p, env, tau)?,
        relative_purity_rate: relative_purity_rate(&p, env, tau)?,
        lambda_sq_qfi: lambda * lambda * qfi_analytic(EstimationTarget::Lambda, &p, env, tau)?,
        tgi_db: if gamma == 0.0 { 0.0 } else { tgi_from_times(tau, tau_ref) },
    })
}

/// One row per γ, in input order. Rows are computed in parallel.
pub fn build_table1(probe: &ProbeSpec, lambda: f64, gammas: &[f64]) -> Result<Vec<TgiRow>> {
    let env = EnvironmentSpec::from_lambda(require_positive("lambda", lambda)?)?;
    let tau_ref = tau_max_exact(&probe.with_gamma(0.0)?, &env)?;
    gammas
        .par_iter()
        .map(|&g| {
            table_row(probe, &env, g, tau_ref).map_err(|e| Error::Row {
                gamma: g,
                source: Box::new(e),
            })
        })
        .collect()
}
