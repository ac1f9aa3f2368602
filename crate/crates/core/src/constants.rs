//! Physical constants (CODATA 2018 exact/recommended values) and the
//! fullerene reference scenario used throughout the figures and the reference table.

use serde::Serialize;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Boltzmann constant, J/K.
pub const K_BOLTZMANN: f64 = 1.380_649e-23;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub hbar: f64,
    pub planck: f64,
    pub k_boltzmann: f64,
}

pub const CODATA: Constants = Constants {
    hbar: HBAR,
    planck: PLANCK,
    k_boltzmann: K_BOLTZMANN,
};

/// Probe and background-gas parameters of one experimental scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    /// Probe mass, kg.
    pub mass: f64,
    /// Initial transverse width, m.
    pub sigma0: f64,
    /// Source coherence length, m.
    pub ell0: f64,
    /// Size of the probe molecule, m.
    pub molecule_size: f64,
    /// Mass of a background gas molecule, kg.
    pub m_air: f64,
    /// Number density of the background gas, m⁻³.
    pub number_density: f64,
}

/// C70-like fullerene beam in a dilute air background.
pub const FULLERENE: Scenario = Scenario {
    mass: 1.2e-24,
    sigma0: 7.8e-9,
    ell0: 5.0e-8,
    molecule_size: 7e-10,
    m_air: 5.0e-26,
    number_density: 1e12,
};
