//! Trace term Φ_Θ = Tr{[adj(σ)·∂_Θσ]²} as a quadratic polynomial in Λ.
//!
//! Φ is expressed in the unscaled moment convention (pure-state determinant
//! 1/4). The scaled covariance used elsewhere in this crate is twice that, so
//! its trace term is 16·Φ.
//!
//! The stored coefficients are already divided by the matching power of ℓ0,
//! which keeps them finite for a fully coherent source.

use serde::Serialize;

use crate::error::{require_positive, Result};
use crate::fisher::EstimationTarget;
use crate::model::{EnvironmentSpec, ProbeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiCoefficients {
    pub target: EstimationTarget,
    /// Coefficients of Λ⁰, Λ¹, Λ² (divided by ℓ0² for γ, ℓ0⁴ for Λ).
    pub terms: [f64; 3],
    /// Γ = 2(σ0/ℓ0)² + γ² + 1, only for the Λ target.
    pub big_gamma: Option<f64>,
    pub value: f64,
}

struct Reduced {
    s2: f64,
    tau0: f64,
    r: f64,
    g: f64,
    q: f64,
    lambda: f64,
}

fn reduced(probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<Reduced> {
    require_positive("t", t)?;
    let tau0 = probe.tau0();
    Ok(Reduced {
        s2: probe.sigma0().powi(2),
        tau0,
        r: probe.coherence_ratio(),
        g: probe.gamma(),
        q: tau0 / t,
        lambda: env.lambda(),
    })
}

fn assemble(terms: [f64; 3], lambda: f64) -> f64 {
    terms[0] + lambda * (terms[1] + lambda * terms[2])
}

pub fn phi_gamma(probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<PhiCoefficients> {
    let Reduced { s2, tau0, r, g, q, lambda } = reduced(probe, env, t)?;
    let tau0_2 = tau0 * tau0;
    let t3 = t * t * t;

    let c0 = 9.0 * tau0_2 * tau0_2 * (1.0 + 2.0 * r);
    let c1 = 12.0 * s2 * tau0_2 * t3 * ((2.0 * r + g * g + 1.0) + 3.0 * g * q + 3.0 * q * q);
    let c2 = 32.0 * s2 * s2 * t3 * t3 * (g * g + 3.0 * g * q + 21.0 / 8.0 * q * q);
    let terms = [c0, c1, c2];

    Ok(PhiCoefficients {
        target: EstimationTarget::Gamma,
        terms,
        big_gamma: None,
        value: assemble(terms, lambda) / (72.0 * tau0_2 * tau0_2),
    })
}

pub fn phi_lambda(probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<PhiCoefficients> {
    let Reduced { s2, tau0, r, g, q, lambda } = reduced(probe, env, t)?;
    let big_gamma = 2.0 * r + g * g + 1.0;
    let s4 = s2 * s2;
    let t2 = t * t;
    let t6 = t2 * t2 * t2;
    let q2 = q * q;

    let z0 = 2.0
        * s4
        * t6
        * (big_gamma * big_gamma
            + 6.0 * g * q * big_gamma
            + 15.0 * q2 * (0.6 * r + g * g + 0.3)
            + 18.0 * g * q2 * q
            + 9.0 * q2 * q2);
    let z1 = 4.0 * s4 * s2 * t6 * t * (big_gamma + 3.0 * g * q + 3.0 * q2);
    let z2 = 4.0 * s4 * s4 * t6 * t2;
    let terms = [z0, z1, z2];

    Ok(PhiCoefficients {
        target: EstimationTarget::Lambda,
        terms,
        big_gamma: Some(big_gamma),
        value: assemble(terms, lambda) / (18.0 * tau0.powi(4)),
    })
}

pub fn phi(target: EstimationTarget, probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<PhiCoefficients> {
    match target {
        EstimationTarget::Gamma => phi_gamma(probe, env, t),
        EstimationTarget::Lambda => phi_lambda(probe, env, t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::state::StatePoint;
    use crate::model::Coherence;
    use crate::numeric::{DoubleDouble, Real};
    use proptest::prelude::*;

    fn env(lambda: f64) -> EnvironmentSpec {
        EnvironmentSpec::from_lambda(lambda).unwrap()
    }

    fn coherent(g: f64) -> ProbeSpec {
        ProbeSpec::fullerene()
            .with_coherence(Coherence::Full)
            .unwrap()
            .with_gamma(g)
            .unwrap()
    }

    #[test]
    fn uncorrelated_coherent_free_value() {
        for t in [1e-8, 1e-6, 1e-3] {
            let p = phi_gamma(&coherent(0.0), &env(0.0), t).unwrap();
            assert!((p.value - 0.125).abs() < 1e-15);
        }
    }

    #[test]
    fn only_constant_term_without_scattering() {
        let probe = ProbeSpec::fullerene().with_gamma(4.0).unwrap();
        let p = phi_gamma(&probe, &env(0.0), 2e-6).unwrap();
        assert_eq!(p.value, p.terms[0] / (72.0 * probe.tau0().powi(4)));
        let l = phi_lambda(&probe, &env(0.0), 2e-6).unwrap();
        assert_eq!(l.value, l.terms[0] / (18.0 * probe.tau0().powi(4)));
    }

    #[test]
    fn big_gamma_for_coherent_uncorrelated() {
        let p = phi_lambda(&coherent(0.0), &env(1e15), 1e-5).unwrap();
        assert_eq!(p.big_gamma, Some(1.0));
    }

    // Independent route: hand-coded partial derivatives of the scaled moments
    // and the trace formed directly, in double-double.
    fn trace_oracle(target: EstimationTarget, probe: &ProbeSpec, lambda: f64, t: f64) -> f64 {
        type D = DoubleDouble;
        let [sxx, sxp, spp] = StatePoint::<D>::new(probe, lambda, t).moments();
        let u = D::of(t) / D::of(probe.tau0());
        let s2 = D::of(probe.sigma0()) * D::of(probe.sigma0());
        let g = D::of(probe.gamma());
        let (one, two, tt) = (D::one(), D::of(2.0), D::of(t));
        let (dxx, dxp, dpp) = match target {
            EstimationTarget::Gamma => (two * u * (one + g * u), one + two * g * u, two * g),
            EstimationTarget::Lambda => (
                D::of(4.0) / D::of(3.0) * s2 * tt * u * u,
                two * s2 * tt * u,
                D::of(4.0) * s2 * tt,
            ),
        };
        let m00 = spp * dxx - sxp * dxp;
        let m01 = spp * dxp - sxp * dpp;
        let m10 = -sxp * dxx + sxx * dxp;
        let m11 = -sxp * dxp + sxx * dpp;
        // Scaled trace is 16·Φ.
        ((m00 * m00 + two * m01 * m10 + m11 * m11) / D::of(16.0)).to_f64()
    }

    #[test]
    fn matches_direct_trace() {
        let cases = [(5.0, 1e20, 1e-6), (-10.0, 1e15, 5e-5), (0.0, 1e13, 1e-3), (50.0, 1e22, 1e-7)];
        for &(g, l, t) in &cases {
            let probe = ProbeSpec::fullerene().with_gamma(g).unwrap();
            for target in EstimationTarget::ALL {
                let a = phi(target, &probe, &env(l), t).unwrap().value;
                let b = trace_oracle(target, &probe, l, t);
                assert!((a / b - 1.0).abs() < 1e-8, "{target} g={g} l={l} t={t}: {a:e} {b:e}");
            }
        }
    }

    #[test]
    fn rejects_zero_time() {
        assert!(phi_gamma(&ProbeSpec::fullerene(), &env(1e15), 0.0).is_err());
    }

    proptest! {
        #[test]
        fn nonnegative_on_positive_quadrant(
            g in 0.0..150.0f64,
            log_l in 0.0..23.0f64,
            log_t in -9.0..-2.0f64,
        ) {
            let probe = ProbeSpec::fullerene().with_gamma(g).unwrap();
            let e = env(10f64.powf(log_l));
            let t = 10f64.powf(log_t);
            prop_assert!(phi_gamma(&probe, &e, t).unwrap().value >= 0.0);
            prop_assert!(phi_lambda(&probe, &e, t).unwrap().value >= 0.0);
        }

        #[test]
        fn nondecreasing_on_positive_quadrant(
            g in 0.0..150.0f64,
            log_l in 0.0..23.0f64,
            log_t in -9.0..-2.0f64,
            step in 1.001..2.0f64,
        ) {
            let (l, t) = (10f64.powf(log_l), 10f64.powf(log_t));
            let at = |g: f64, l: f64, t: f64| {
                let probe = ProbeSpec::fullerene().with_gamma(g).unwrap();
                let e = env(l);
                (phi_gamma(&probe, &e, t).unwrap().value, phi_lambda(&probe, &e, t).unwrap().value)
            };
            let base = at(g, l, t);
            let slack = |x: f64| x * (1.0 - 1e-12);
            for next in [at(g * step + 1e-3, l, t), at(g, l * step, t), at(g, l, t * step)] {
                prop_assert!(next.0 >= slack(base.0));
                prop_assert!(next.1 >= slack(base.1));
            }
        }
    }
}
