use serde::Serialize;

use crate::error::Result;
use crate::model::environment::EnvironmentSpec;
use crate::model::probe::ProbeSpec;
use crate::model::purity::require_time;
use crate::model::state::StatePoint;
use crate::numeric::{DoubleDouble, Real};

/// Symmetric 2×2 second-moment matrix of (x̂/σ0, p̂σ0/ħ), scaled so that a
/// pure state has unit determinant: det = μ⁻².
///
/// Entries computed by [`covariance`] carry a double-double low word. For
/// large γt/τ0 the entries grow past 1e9 while the determinant stays O(1), so
/// rounding the entries to f64 alone would lose most of its digits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceMatrix {
    sxx: f64,
    sxp: f64,
    spp: f64,
    #[serde(skip)]
    lo: [f64; 3],
}

impl CovarianceMatrix {
    pub const IDENTITY: CovarianceMatrix = CovarianceMatrix {
        sxx: 1.0,
        sxp: 0.0,
        spp: 1.0,
        lo: [0.0; 3],
    };

    pub fn new(sxx: f64, sxp: f64, spp: f64) -> Self {
        CovarianceMatrix {
            sxx,
            sxp,
            spp,
            lo: [0.0; 3],
        }
    }

    pub(crate) fn from_extended(m: [DoubleDouble; 3]) -> Self {
        let split = |x: DoubleDouble| {
            let hi = x.to_f64();
            (hi, (x - DoubleDouble::of(hi)).to_f64())
        };
        let (sxx, a) = split(m[0]);
        let (sxp, b) = split(m[1]);
        let (spp, c) = split(m[2]);
        CovarianceMatrix {
            sxx,
            sxp,
            spp,
            lo: [a, b, c],
        }
    }

    pub fn sxx(&self) -> f64 {
        self.sxx
    }

    pub fn sxp(&self) -> f64 {
        self.sxp
    }

    pub fn spp(&self) -> f64 {
        self.spp
    }

    fn extended(&self) -> [DoubleDouble; 3] {
        let join = |hi: f64, lo: f64| DoubleDouble::of(hi) + DoubleDouble::of(lo);
        [
            join(self.sxx, self.lo[0]),
            join(self.sxp, self.lo[1]),
            join(self.spp, self.lo[2]),
        ]
    }

    /// sxx·spp − sxp², evaluated in double-double.
    pub fn det(&self) -> f64 {
        let [a, b, c] = self.extended();
        (a * c - b * b).to_f64()
    }

    /// Swaps the diagonal and negates the off-diagonal.
    pub fn adjugate(&self) -> CovarianceMatrix {
        CovarianceMatrix {
            sxx: self.spp,
            sxp: -self.sxp,
            spp: self.sxx,
            lo: [self.lo[2], -self.lo[1], self.lo[0]],
        }
    }

    pub fn to_array(&self) -> [[f64; 2]; 2] {
        [[self.sxx, self.sxp], [self.sxp, self.spp]]
    }
}

/// Scaled covariance of the evolved state. First moments vanish identically.
///
/// Valid for t ≥ 0; at t = 0 this is the initial state
/// `[[1, γ], [γ, 1 + γ² + 2σ0²/ℓ0²]]`.
pub fn covariance(probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<CovarianceMatrix> {
    require_time(t)?;
    let m = StatePoint::<DoubleDouble>::new(probe, env.lambda(), t).moments();
    Ok(CovarianceMatrix::from_extended(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::probe::Coherence;

    #[test]
    fn pure_initial_state_has_unit_determinant() {
        for g in [-150.0, -1.0, 0.0, 0.3, 42.0] {
            let p = ProbeSpec::fullerene()
                .with_coherence(Coherence::Full)
                .unwrap()
                .with_gamma(g)
                .unwrap();
            let c = covariance(&p, &EnvironmentSpec::vacuum(), 0.0).unwrap();
            assert!((c.det() - 1.0).abs() < 1e-12 * (1.0 + g * g), "g={g}");
        }
    }

    #[test]
    fn partially_coherent_initial_determinant() {
        // t = 0: [[1, 0], [0, 1 + 2σ0²/ℓ0²]]
        let p = ProbeSpec::fullerene();
        let c = covariance(&p, &EnvironmentSpec::vacuum(), 0.0).unwrap();
        let expected = 1.0 + 2.0 * (7.8e-9_f64 / 5e-8).powi(2);
        assert!((c.det() - expected).abs() < 1e-15);
    }

    #[test]
    fn table_one_reference_purity() {
        let env = EnvironmentSpec::from_lambda(1e15).unwrap();
        let c = covariance(&ProbeSpec::fullerene(), &env, 2.284e-4).unwrap();
        let mu = 1.0 / c.det().sqrt();
        assert!((mu - 0.563).abs() < 0.005, "{mu}");
    }

    #[test]
    fn adjugate_times_matrix_is_det_identity() {
        let c = CovarianceMatrix::new(3.0, -1.5, 2.0);
        let a = c.adjugate();
        let m = c.to_array();
        let j = a.to_array();
        let det = c.det();
        for i in 0..2 {
            for k in 0..2 {
                let v: f64 = (0..2).map(|l| j[i][l] * m[l][k]).sum();
                let want = if i == k { det } else { 0.0 };
                assert!((v - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn determinant_survives_large_entries() {
        // γt/τ0 ≈ 7e4: entries near 5e9, det = 1 + 2(σ0/ℓ0)² exactly.
        let p = ProbeSpec::fullerene().with_gamma(50.0).unwrap();
        let c = covariance(&p, &EnvironmentSpec::vacuum(), 1e-3).unwrap();
        assert!(c.sxx() > 1e9);
        let want = 1.0 + 2.0 * p.coherence_ratio();
        assert!((c.det() / want - 1.0).abs() < 1e-14, "{}", c.det());
    }

    #[test]
    fn rejects_negative_time() {
        let env = EnvironmentSpec::vacuum();
        assert!(covariance(&ProbeSpec::fullerene(), &env, -1e-9).is_err());
        assert!(covariance(&ProbeSpec::fullerene(), &env, f64::NAN).is_err());
    }
}
