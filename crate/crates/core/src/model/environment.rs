use serde::Serialize;

use crate::error::{require_non_negative, Result};
use crate::thermometry::{lambda_from_temperature, ScatteringGas};

/// Temperature and gas from which a scattering constant was derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalSource {
    /// Bath temperature, K.
    pub temperature: f64,
    pub gas: ScatteringGas,
}

/// Markovian scattering environment, characterised by Λ (m⁻²·s⁻¹).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvironmentSpec {
    lambda: f64,
    thermal: Option<ThermalSource>,
}

impl EnvironmentSpec {
    pub fn from_lambda(lambda: f64) -> Result<Self> {
        require_non_negative("lambda", lambda)?;
        Ok(EnvironmentSpec {
            lambda,
            thermal: None,
        })
    }

    /// No scattering, Λ = 0.
    pub fn vacuum() -> Self {
        EnvironmentSpec {
            lambda: 0.0,
            thermal: None,
        }
    }

    pub fn from_temperature(temperature: f64, gas: ScatteringGas) -> Result<Self> {
        let lambda = lambda_from_temperature(temperature, &gas)?;
        Ok(EnvironmentSpec {
            lambda,
            thermal: Some(ThermalSource { temperature, gas }),
        })
    }

    /// Same source, different Λ. Drops any thermal provenance.
    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        EnvironmentSpec::from_lambda(lambda)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn thermal(&self) -> Option<&ThermalSource> {
        self.thermal.as_ref()
    }
}
