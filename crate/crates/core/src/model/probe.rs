use serde::Serialize;

use crate::constants::{FULLERENE, HBAR};
use crate::error::{require_finite, require_positive, Error, Result};

/// Transverse coherence of the source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coherence {
    /// Ideal collimation, ℓ0 → ∞: the initial state is pure.
    Full,
    /// Finite coherence length ℓ0 in metres.
    Length(f64),
}

impl Coherence {
    /// `+∞` maps to [`Coherence::Full`].
    pub fn from_length(ell0: f64) -> Result<Self> {
        if ell0 == f64::INFINITY {
            Ok(Coherence::Full)
        } else {
            require_positive("ell0", ell0).map(Coherence::Length)
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Coherence::Full => f64::INFINITY,
            Coherence::Length(l) => l,
        }
    }
}

/// A position-momentum correlated Gaussian matter-wave probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeSpec {
    mass: f64,
    sigma0: f64,
    coherence: Coherence,
    gamma: f64,
}

impl ProbeSpec {
    pub fn new(mass: f64, sigma0: f64, coherence: Coherence, gamma: f64) -> Result<Self> {
        require_positive("mass", mass)?;
        require_positive("sigma0", sigma0)?;
        if let Coherence::Length(l) = coherence {
            require_positive("ell0", l)?;
        }
        require_finite("gamma", gamma)?;
        Ok(ProbeSpec {
            mass,
            sigma0,
            coherence,
            gamma,
        })
    }

    /// Fullerene reference probe with γ = 0 and ℓ0 = 50 nm.
    pub fn fullerene() -> Self {
        ProbeSpec {
            mass: FULLERENE.mass,
            sigma0: FULLERENE.sigma0,
            coherence: Coherence::Length(FULLERENE.ell0),
            gamma: 0.0,
        }
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        ProbeSpec::new(self.mass, self.sigma0, self.coherence, gamma)
    }

    pub fn with_coherence(self, coherence: Coherence) -> Result<Self> {
        ProbeSpec::new(self.mass, self.sigma0, coherence, self.gamma)
    }

    pub fn with_mass(self, mass: f64) -> Result<Self> {
        ProbeSpec::new(mass, self.sigma0, self.coherence, self.gamma)
    }

    pub fn with_sigma0(self, sigma0: f64) -> Result<Self> {
        ProbeSpec::new(self.mass, sigma0, self.coherence, self.gamma)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn coherence(&self) -> Coherence {
        self.coherence
    }

    /// Coherence length in metres, `+∞` for a fully coherent source.
    pub fn ell0(&self) -> f64 {
        self.coherence.length()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// (σ0/ℓ0)², exactly zero for a fully coherent source.
    pub fn coherence_ratio(&self) -> f64 {
        match self.coherence {
            Coherence::Full => 0.0,
            Coherence::Length(l) => (self.sigma0 / l).powi(2),
        }
    }

    /// Spreading time m·σ0²/ħ.
    pub fn tau0(&self) -> f64 {
        self.mass * self.sigma0 * self.sigma0 / HBAR
    }
}

/// Spreading time m·σ0²/ħ of the free wave packet.
pub fn tau0(probe: &ProbeSpec) -> f64 {
    probe.tau0()
}

/// Pearson correlation between x̂ and p̂ of the initial state.
pub fn pearson_from_gamma(gamma: f64) -> f64 {
    gamma / (1.0 + gamma * gamma).sqrt()
}

pub fn gamma_from_pearson(r: f64) -> Result<f64> {
    if !(r.abs() < 1.0) {
        return Err(Error::CorrelationOutOfRange { r });
    }
    Ok(r / (1.0 - r * r).sqrt())
}
