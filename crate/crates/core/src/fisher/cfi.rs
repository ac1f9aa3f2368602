//! Fisher information of a position measurement, where the readout density
//! is a zero-mean Gaussian of variance V(Θ).

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::HBAR;
use crate::error::{require_positive, Error, Result};
use crate::fisher::qfi::StepPolicy;
use crate::fisher::EstimationTarget;
use crate::model::state::StatePoint;
use crate::model::{kernel_params, EnvironmentSpec, ProbeSpec};
use crate::numeric::quad::integrate;
use crate::numeric::{derivative, DoubleDouble, Real};

/// Half-width of the integration window in standard deviations.
pub const WINDOW_SIGMAS: f64 = 12.0;
/// Relative accuracy requested from the quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
/// Largest tolerated contribution from beyond the window, relative to the result.
pub const TAIL_TOLERANCE: f64 = 1e-8;

/// CFI from the kernel width B².
pub fn cfi_closed(target: EstimationTarget, probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<f64> {
    let k = kernel_params(probe, env, t)?;
    let s4 = probe.sigma0().powi(4);
    let b4 = k.b_sq * k.b_sq;
    Ok(match target {
        EstimationTarget::Gamma => {
            let drift = probe.mass() / (HBAR * t) + probe.gamma() / probe.sigma0().powi(2);
            drift * drift / (8.0 * s4 * b4)
        }
        EstimationTarget::Lambda => t * t / (18.0 * s4 * b4),
    })
}

/// Two numerical routes to the position-readout CFI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfiOracles {
    /// ∫(∂_ΘP)²/P dx with ∂_ΘP by finite differences.
    pub quadrature: f64,
    /// (∂_ΘV)²/(2V²) with ∂_ΘV by finite differences.
    pub gaussian_identity: f64,
}

type Dd = DoubleDouble;

fn variance_at(base: StatePoint<Dd>, target: EstimationTarget, theta: Dd) -> Dd {
    match target {
        EstimationTarget::Gamma => base.with_gamma(theta).position_variance(),
        EstimationTarget::Lambda => base.with_lambda(theta).position_variance(),
    }
}

fn density(x: Dd, v: Dd) -> Dd {
    (-(x * x) / (Dd::of(2.0) * v)).exp() / (Dd::of(2.0 * PI) * v).sqrt()
}

pub fn cfi_quadrature(target: EstimationTarget, probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<CfiOracles> {
    require_positive("t", t)?;
    let policy = StepPolicy::default();
    let theta0 = match target {
        EstimationTarget::Gamma => probe.gamma(),
        EstimationTarget::Lambda => env.lambda(),
    };
    let base = StatePoint::<Dd>::new(probe, env.lambda(), t);
    let x0 = Dd::of(theta0);
    let h = Dd::of(policy.base_step(target, theta0));

    let v0 = variance_at(base, target, x0);
    let dv = derivative(|th| variance_at(base, target, th), x0, h, policy.tolerance)?.value;
    let gaussian_identity = (dv * dv / (Dd::of(2.0) * v0 * v0)).to_f64();

    // Integrate in z = x/√V0 so the window is parameter independent.
    let sd = v0.sqrt();
    let integrand = |z: f64| -> f64 {
        let x = Dd::of(z) * sd;
        let p = density(x, v0);
        let dp = crate::numeric::central_richardson(|th| density(x, variance_at(base, target, th)), x0, h).value;
        (dp * dp / p * sd).to_f64()
    };
    let result = integrate(integrand, -WINDOW_SIGMAS, WINDOW_SIGMAS, QUADRATURE_TOLERANCE)?;

    // The integrand decays like z⁴e^{−z²/2}; beyond the edge the mass is
    // bounded by f(edge)/edge times a small constant.
    let tail = 2.0 * integrand(WINDOW_SIGMAS) / WINDOW_SIGMAS * 2.0;
    if tail > TAIL_TOLERANCE * result.value.abs() && tail > f64::MIN_POSITIVE {
        return Err(Error::QuadratureTolerance { error_estimate: tail });
    }

    Ok(CfiOracles {
        quadrature: result.value,
        gaussian_identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fisher::qfi::qfi_analytic;

    fn env(lambda: f64) -> EnvironmentSpec {
        EnvironmentSpec::from_lambda(lambda).unwrap()
    }

    fn probe(g: f64) -> ProbeSpec {
        ProbeSpec::fullerene().with_gamma(g).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    #[test]
    fn oracles_agree_at_reference_point() {
        for target in EstimationTarget::ALL {
            let o = cfi_quadrature(target, &probe(0.0), &env(1e15), 5e-5).unwrap();
            assert!(rel(o.quadrature, o.gaussian_identity) < 1e-7, "{target}: {o:?}");
            let c = cfi_closed(target, &probe(0.0), &env(1e15), 5e-5).unwrap();
            assert!(rel(c, o.gaussian_identity) < 1e-6, "{target}: {c} {o:?}");
        }
    }

    #[test]
    fn gamma_information_vanishes_at_stationary_point() {
        let p = probe(0.0);
        let t = 1e-6;
        let g = -p.tau0() / t;
        let p = probe(g);
        assert!(cfi_closed(EstimationTarget::Gamma, &p, &env(1e15), t).unwrap() < 1e-20);
        let o = cfi_quadrature(EstimationTarget::Gamma, &p, &env(1e15), t).unwrap();
        assert!(o.quadrature.abs() < 1e-10 && o.gaussian_identity.abs() < 1e-10, "{o:?}");
    }

    #[test]
    fn lambda_information_is_sign_blind() {
        let t = 3e-6;
        let p = probe(0.0);
        let g = p.tau0() / t;
        // γ = −τ0/t ± 4 flips the sign of m/(ħt) + γ/σ0²
        let plus = cfi_closed(EstimationTarget::Lambda, &probe(-g + 4.0), &env(1e18), t).unwrap();
        let minus = cfi_closed(EstimationTarget::Lambda, &probe(-g - 4.0), &env(1e18), t).unwrap();
        assert!(plus > 0.0);
        assert!(rel(plus, minus) < 1e-12);
    }

    #[test]
    fn bounded_by_quantum_information() {
        for &(g, l, t) in &[(0.0, 1e15, 5e-5), (50.0, 1e20, 1e-6), (-5.0, 1e13, 1e-3)] {
            for target in EstimationTarget::ALL {
                let q = qfi_analytic(target, &probe(g), &env(l), t).unwrap();
                let c = cfi_closed(target, &probe(g), &env(l), t).unwrap();
                assert!(q >= c * (1.0 - 1e-9), "{target} g={g}: {q} < {c}");
            }
        }
    }
    #[test]
    fn comparable_to_quantum_information_in_strong_scattering() {
        // Λ = 1e23, t = 1 μs. The ratio only drops below one half near the
        // zero of the γ readout at γ = −τ0/t.
        let t = 1e-6;
        let zero = -probe(0.0).tau0() / t;
        for i in 0..=400 {
            let g = -10.0 + 0.05 * i as f64;
            if (g - zero).abs() < 1.5 {
                continue;
            }
            let c = cfi_closed(EstimationTarget::Gamma, &probe(g), &env(1e23), t).unwrap();
            let q = qfi_analytic(EstimationTarget::Gamma, &probe(g), &env(1e23), t).unwrap();
            assert!(c / q > 0.5, "g={g}: {}", c / q);
        }
        let c = cfi_closed(EstimationTarget::Gamma, &probe(zero), &env(1e23), t).unwrap();
        assert!(c.abs() < 1e-20);
    }
}
