//! Closed-form second moments and purity bracket at one (γ, Λ, t) point,
//! generic over the scalar so the oracles can re-evaluate them in
//! double-double.
//!
//! With u = t/τ0, r = (σ0/ℓ0)² and s = Λσ0²t (all dimensionless), the scaled
//! moments are
//!
//! ```text
//! sxx = (1 + γu)² + (1 + 2r)u² + (4/3)s·u²
//! sxp = γ + (1 + γ² + 2r)u + 2s·u
//! spp = 1 + γ² + 2r + 4s
//! ```
//!
//! and the purity bracket μ⁻² = 1 + e with
//!
//! ```text
//! e = 2r + 4s + 4γs·u + (4/3)s(γ² + 1 + 2r)u² + (4/3)s²u²
//! ```

use crate::model::probe::ProbeSpec;
use crate::numeric::Real;

#[derive(Debug, Clone, Copy)]
pub(crate) struct StatePoint<T> {
    pub sigma0_sq: T,
    pub tau0: T,
    pub ratio: T,
    pub gamma: T,
    pub lambda: T,
    pub t: T,
}

impl<T: Real> StatePoint<T> {
    pub fn new(probe: &ProbeSpec, lambda: f64, t: f64) -> Self {
        StatePoint {
            sigma0_sq: T::of(probe.sigma0()) * T::of(probe.sigma0()),
            tau0: T::of(probe.tau0()),
            ratio: T::of(probe.coherence_ratio()),
            gamma: T::of(probe.gamma()),
            lambda: T::of(lambda),
            t: T::of(t),
        }
    }

    pub fn with_gamma(mut self, gamma: T) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_lambda(mut self, lambda: T) -> Self {
        self.lambda = lambda;
        self
    }

    #[cfg(test)]
    pub fn with_time(mut self, t: T) -> Self {
        self.t = t;
        self
    }

    fn u(&self) -> T {
        self.t / self.tau0
    }

    fn s(&self) -> T {
        self.lambda * self.sigma0_sq * self.t
    }

    /// Scaled covariance entries `[sxx, sxp, spp]`.
    pub fn moments(&self) -> [T; 3] {
        let one = T::one();
        let two = T::of(2.0);
        let (g, r, u, s) = (self.gamma, self.ratio, self.u(), self.s());
        let gu1 = one + g * u;
        let sxx = gu1 * gu1 + (one + two * r) * u * u + T::of(4.0 / 3.0) * s * u * u;
        let sxp = g + (one + g * g + two * r) * u + two * s * u;
        let spp = one + g * g + two * r + T::of(4.0) * s;
        [sxx, sxp, spp]
    }

    /// e = μ⁻² − 1, summed term by term so that it keeps full relative
    /// precision as μ → 1.
    pub fn purity_excess(&self) -> T {
        let two = T::of(2.0);
        let four = T::of(4.0);
        let four_thirds = T::of(4.0 / 3.0);
        let (g, r, u, s) = (self.gamma, self.ratio, self.u(), self.s());
        two * r
            + four * s
            + four * g * s * u
            + four_thirds * s * (g * g + T::one() + two * r) * u * u
            + four_thirds * s * s * u * u
    }

    /// Physical variance of the position density, m².
    pub fn position_variance(&self) -> T {
        self.sigma0_sq * self.moments()[0] / T::of(2.0)
    }
}

impl StatePoint<f64> {
    /// ∂e/∂γ.
    pub fn excess_d_gamma(&self) -> f64 {
        let (g, u, s) = (self.gamma, self.u(), self.s());
        4.0 * s * u + (8.0 / 3.0) * s * g * u * u
    }

    /// ∂e/∂Λ.
    pub fn excess_d_lambda(&self) -> f64 {
        let (g, r, u, s) = (self.gamma, self.ratio, self.u(), self.s());
        self.sigma0_sq
            * self.t
            * (4.0
                + 4.0 * g * u
                + (4.0 / 3.0) * (g * g + 1.0 + 2.0 * r) * u * u
                + (8.0 / 3.0) * s * u * u)
    }

    /// ∂e/∂t.
    pub fn excess_d_time(&self) -> f64 {
        let (g, r, u, s) = (self.gamma, self.ratio, self.u(), self.s());
        self.lambda
            * self.sigma0_sq
            * (4.0
                + 8.0 * g * u
                + 4.0 * (g * g + 1.0 + 2.0 * r) * u * u
                + (16.0 / 3.0) * s * u * u)
    }
}
