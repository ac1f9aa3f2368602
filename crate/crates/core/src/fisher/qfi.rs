use serde::Serialize;

use crate::error::{require_positive, Error, Result};
use crate::fisher::phi::phi;
use crate::fisher::EstimationTarget;
use crate::model::state::StatePoint;
use crate::model::{purity_bracket, EnvironmentSpec, ProbeSpec};
use crate::numeric::{derivative, DoubleDouble, Real};

/// The two additive pieces of the single-mode Gaussian QFI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QfiTerms {
    /// μ⁴/(2(1+μ²))·Tr{[adj(σ)∂σ]²}
    pub covariance_term: f64,
    /// 2(∂μ)²/(1−μ⁴)
    pub purity_term: f64,
}

impl QfiTerms {
    pub fn total(&self) -> f64 {
        self.covariance_term + self.purity_term
    }
}

/// Closed-form QFI split into its two terms.
///
/// With b = μ⁻² = 1 + e the terms reduce to 8Φ/(b(b+1)) and
/// (∂b)²/(2b·e(2+e)), which avoids forming 1 − μ⁴ near μ = 1.
pub fn qfi_terms(target: EstimationTarget, probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<QfiTerms> {
    let phi = phi(target, probe, env, t)?.value;
    let bracket = purity_bracket(probe, env, t)?;
    let (b, e) = (bracket.value(), bracket.excess);
    let db = match target {
        EstimationTarget::Gamma => bracket.d_gamma,
        EstimationTarget::Lambda => bracket.d_lambda,
    };

    let covariance_term = 8.0 * phi / (b * (b + 1.0));
    let purity_term = if e == 0.0 {
        if db != 0.0 {
            return Err(Error::PureStateLimit {
                derivative: bracket.purity_derivative(db),
            });
        }
        0.0
    } else {
        db * db / (2.0 * b * e * (2.0 + e))
    };
    Ok(QfiTerms {
        covariance_term,
        purity_term,
    })
}

pub fn qfi_analytic(target: EstimationTarget, probe: &ProbeSpec, env: &EnvironmentSpec, t: f64) -> Result<f64> {
    qfi_terms(target, probe, env, t).map(|q| q.total())
}

/// Step selection for the finite-difference oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepPolicy {
    /// Base step relative to max(|Θ|, scale).
    pub relative_step: f64,
    pub gamma_scale: f64,
    /// m⁻²·s⁻¹
    pub lambda_scale: f64,
    /// Allowed relative spread between the last two Richardson orders.
    pub tolerance: f64,
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy {
            relative_step: 1e-4,
            gamma_scale: 1.0,
            lambda_scale: 1e12,
            tolerance: 1e-6,
        }
    }
}

impl StepPolicy {
    pub fn base_step(&self, target: EstimationTarget, theta: f64) -> f64 {
        let scale = match target {
            EstimationTarget::Gamma => self.gamma_scale,
            EstimationTarget::Lambda => self.lambda_scale,
        };
        self.relative_step * theta.abs().max(scale)
    }

    pub fn halved(self) -> Self {
        StepPolicy {
            relative_step: self.relative_step / 2.0,
            ..self
        }
    }
}

type Dd = DoubleDouble;

fn moments_at(base: StatePoint<Dd>, target: EstimationTarget, theta: Dd) -> [Dd; 3] {
    match target {
        EstimationTarget::Gamma => base.with_gamma(theta).moments(),
        EstimationTarget::Lambda => base.with_lambda(theta).moments(),
    }
}

fn det(m: [Dd; 3]) -> Dd {
    m[0] * m[2] - m[1] * m[1]
}

/// QFI from the general Gaussian formula with every derivative taken by
/// Richardson-extrapolated central differences of the moments, evaluated in
/// double-double.
pub fn qfi_numeric(
    target: EstimationTarget,
    probe: &ProbeSpec,
    env: &EnvironmentSpec,
    t: f64,
    policy: &StepPolicy,
) -> Result<f64> {
    require_positive("t", t)?;
    let theta0 = match target {
        EstimationTarget::Gamma => probe.gamma(),
        EstimationTarget::Lambda => env.lambda(),
    };
    let base = StatePoint::<Dd>::new(probe, env.lambda(), t);
    let x = Dd::of(theta0);
    let h = Dd::of(policy.base_step(target, theta0));

    let m = moments_at(base, target, x);
    let mut dm = [Dd::zero(); 3];
    for (k, slot) in dm.iter_mut().enumerate() {
        *slot = derivative(|th| moments_at(base, target, th)[k], x, h, policy.tolerance)?.value;
    }

    let d = det(m);
    let mu = Dd::one() / d.sqrt();
    // ∂μ = −½ det^{−3/2} ∂det, with ∂det from the differentiated moments. A
    // direct difference of μ drowns in the rounding of m[0]·m[2] once the
    // entries are large and μ barely moves.
    let d_det = dm[0] * m[2] + m[0] * dm[2] - Dd::of(2.0) * m[1] * dm[1];
    let dmu = -Dd::of(0.5) * d_det / (d * d.sqrt());

    // adj(σ)·∂σ
    let a00 = m[2] * dm[0] - m[1] * dm[1];
    let a01 = m[2] * dm[1] - m[1] * dm[2];
    let a10 = m[0] * dm[1] - m[1] * dm[0];
    let a11 = m[0] * dm[2] - m[1] * dm[1];
    let trace = a00 * a00 + Dd::of(2.0) * a01 * a10 + a11 * a11;

    let mu2 = mu * mu;
    let covariance_term = mu2 * mu2 / (Dd::of(2.0) * (Dd::one() + mu2)) * trace;

    // Below this the state is pure to working precision.
    let noise = Dd::of(1e3 * Dd::EPS) * m[0] * m[2];
    let one_minus_mu4 = Dd::one() - mu2 * mu2;
    let purity_term = if (d - Dd::one()).abs() <= noise {
        if (dmu * h).abs() > noise {
            return Err(Error::PureStateLimit {
                derivative: dmu.to_f64(),
            });
        }
        Dd::zero()
    } else {
        Dd::of(2.0) * dmu * dmu / one_minus_mu4
    };

    Ok((covariance_term + purity_term).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Coherence;

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
    fn pure_uncorrelated_free_value() {
        let p = ProbeSpec::fullerene().with_coherence(Coherence::Full).unwrap();
        for t in [1e-7, 1e-5] {
            let q = qfi_terms(EstimationTarget::Gamma, &p, &env(0.0), t).unwrap();
            assert_eq!(q.purity_term, 0.0);
            assert!((q.total() - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn purity_term_vanishes_for_gamma_without_scattering() {
        let q = qfi_terms(EstimationTarget::Gamma, &probe(12.0), &env(0.0), 1e-6).unwrap();
        assert_eq!(q.purity_term, 0.0);
        assert!(q.covariance_term > 0.0);
    }

    #[test]
    fn numeric_matches_analytic_at_documented_points() {
        let policy = StepPolicy::default();
        let a = qfi_analytic(EstimationTarget::Gamma, &probe(5.0), &env(1e20), 1e-6).unwrap();
        let n = qfi_numeric(EstimationTarget::Gamma, &probe(5.0), &env(1e20), 1e-6, &policy).unwrap();
        assert!(rel(n, a) < 1e-6, "{n} {a}");
        let a = qfi_analytic(EstimationTarget::Lambda, &probe(-10.0), &env(1e15), 5e-5).unwrap();
        let n = qfi_numeric(EstimationTarget::Lambda, &probe(-10.0), &env(1e15), 5e-5, &policy).unwrap();
        assert!(rel(n, a) < 1e-6, "{n} {a}");
    }

    #[test]
    fn numeric_is_step_invariant() {
        let policy = StepPolicy::default();
        for target in EstimationTarget::ALL {
            let a = qfi_numeric(target, &probe(5.0), &env(1e20), 1e-6, &policy).unwrap();
            let b = qfi_numeric(target, &probe(5.0), &env(1e20), 1e-6, &policy.halved()).unwrap();
            assert!(rel(a, b) < 1e-7, "{target}: {a} {b}");
        }
    }

    #[test]
    fn numeric_handles_pure_free_evolution() {
        let p = ProbeSpec::fullerene()
            .with_coherence(Coherence::Full)
            .unwrap()
            .with_gamma(3.0)
            .unwrap();
        let n = qfi_numeric(EstimationTarget::Gamma, &p, &env(0.0), 1e-6, &StepPolicy::default()).unwrap();
        let a = qfi_analytic(EstimationTarget::Gamma, &p, &env(0.0), 1e-6).unwrap();
        assert!(n.is_finite());
        assert!(rel(n, a) < 1e-6);
    }

    #[test]
    fn reference_lambda_information() {
        // Λ²F at the purity-rate maximum for γ = 0 and γ = 150.
        for &(g, t) in &[(0.0, 2.284e-4), (150.0, 8.2e-6)] {
            let f = qfi_analytic(EstimationTarget::Lambda, &probe(g), &env(1e15), t).unwrap();
            let scaled = 1e30 * f;
            assert!((scaled / 0.247 - 1.0).abs() < 0.02, "g={g}: {scaled}");
        }
    }

    #[test]
    fn base_step_floors() {
        let p = StepPolicy::default();
        assert_eq!(p.base_step(EstimationTarget::Gamma, 0.0), 1e-4);
        assert_eq!(p.base_step(EstimationTarget::Gamma, -50.0), 5e-3);
        assert_eq!(p.base_step(EstimationTarget::Lambda, 0.0), 1e8);
        assert_eq!(p.base_step(EstimationTarget::Lambda, 1e20), 1e16);
    }
}
