//! Gaussian kernel of the evolved density matrix,
//! ρ(x, x′) = N_t exp{−𝒜 x² − 𝒜* x′² + 𝒞 x x′}.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::model::environment::EnvironmentSpec;
use crate::model::probe::ProbeSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelParams {
    /// m⁻²
    pub a1: f64,
    /// m⁻²
    pub a2: f64,
    /// m⁻²
    pub a3: f64,
    /// m⁻⁴
    pub b_sq: f64,
    /// m⁻¹
    pub n_t: f64,
}

/// Hermitian combinations: 𝒜 = (A1 + A2) − iA3, 𝒜* for x′, 𝒞 = 2A2 (real).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelCombinations {
    pub a_re: f64,
    pub a_im: f64,
    pub c: f64,
}

impl KernelParams {
    /// Variance of the position density ρ(x, x) = N_t exp(−2A1 x²).
    pub fn position_variance(&self) -> f64 {
        1.0 / (4.0 * self.a1)
    }

    pub fn diagonal_density(&self, x: f64) -> f64 {
        self.n_t * (-2.0 * self.a1 * x * x).exp()
    }

    /// Tr ρ² of the kernel, √(A1 / (A1 + 2A2)).
    pub fn purity(&self) -> f64 {
        (self.a1 / (self.a1 + 2.0 * self.a2)).sqrt()
    }

    pub fn combinations(&self) -> KernelCombinations {
        KernelCombinations {
            a_re: self.a1 + self.a2,
            a_im: -self.a3,
            c: 2.0 * self.a2,
        }
    }
}

/// Kernel coefficients after evolving for `t` > 0 under the scattering channel.
pub fn kernel_params(probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<KernelParams> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::KernelUndefinedAtZero { t });
    }
    let m = probe.mass();
    let s2 = probe.sigma0().powi(2);
    let s4 = s2 * s2;
    let g = probe.gamma();
    let lambda = env.lambda();
    // 1/ℓ0², exactly zero for a coherent source
    let inv_l2 = probe.coherence_ratio() / s2;
    let lt = lambda * t;
    let k = m / (HBAR * t);

    let drift = 0.5 * k + g / (2.0 * s2);
    let b_sq = 1.0 / (4.0 * s4) + inv_l2 / (2.0 * s2) + drift * drift + lt / (3.0 * s2);

    let a1 = k * k / (8.0 * s2 * b_sq);
    let a2 = k * k / (4.0 * b_sq) * (0.5 * inv_l2 + lt)
        + lt / (12.0 * s2 * b_sq) * (lt + 1.0 / s2 + 2.0 * inv_l2)
        + m * lambda * g / (4.0 * HBAR * s2 * b_sq)
        + lt * g * g / (12.0 * s4 * b_sq);
    let a3 = k / (4.0 * s2 * b_sq) * (lt + 1.0 / (2.0 * s2) + inv_l2)
        + k * g / (8.0 * s2 * b_sq) * (k + g / s2);
    let n_t = (2.0 * a1 / PI).sqrt();

    Ok(KernelParams {
        a1,
        a2,
        a3,
        b_sq,
        n_t,
    })
}
