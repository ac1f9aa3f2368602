//! Standing-wave atom lens: Rabi profile, optical potential, focal length and
//! the wavefront-curvature to γ map.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{HBAR, PLANCK};
use crate::error::{require_finite, require_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LensSpec {
    /// Peak Rabi frequency, rad/s.
    omega0: f64,
    /// Laser wavelength, m.
    wavelength: f64,
    /// ω − ω0, rad/s.
    detuning: f64,
    /// Centre-of-mass speed, m/s.
    v_cm: f64,
    /// Effective interaction time, s.
    t_int: f64,
}

impl LensSpec {
    pub fn new(omega0: f64, wavelength: f64, detuning: f64, v_cm: f64, t_int: f64) -> Result<Self> {
        Ok(LensSpec {
            omega0: require_positive("omega0", omega0)?,
            wavelength: require_positive("wavelength", wavelength)?,
            detuning: require_finite("detuning", detuning)?,
            v_cm: require_positive("v_cm", v_cm)?,
            t_int: require_positive("t_int", t_int)?,
        })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }
    pub fn detuning(&self) -> f64 {
        self.detuning
    }
    pub fn v_cm(&self) -> f64 {
        self.v_cm
    }
    pub fn t_int(&self) -> f64 {
        self.t_int
    }

    /// 2π/λ
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }
}

/// Ω0·cos(2πx/λ)·exp(−πz²/(V_CM·t_int)²), rad/s.
pub fn rabi_profile(lens: &LensSpec, x: f64, z: f64) -> f64 {
    let w = lens.v_cm * lens.t_int;
    lens.omega0 * (lens.wavenumber() * x).cos() * (-PI * z * z / (w * w)).exp()
}

/// Optical potential in angular-frequency units (energy/ħ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpticalPotential {
    /// −½√(Ω² + δ²)
    pub full: f64,
    /// ¼Ω0k²x²(1 + δ²/Ω0²), measured from the well bottom.
    pub harmonic: f64,
}

pub fn optical_potential(lens: &LensSpec, x: f64, z: f64) -> OpticalPotential {
    let omega = rabi_profile(lens, x, z);
    let k = lens.wavenumber();
    let ratio = lens.detuning / lens.omega0;
    OpticalPotential {
        full: -0.5 * omega.hypot(lens.detuning),
        harmonic: 0.25 * lens.omega0 * k * k * x * x * (1.0 + ratio * ratio),
    }
}

/// h/(m·V_CM), m.
pub fn de_broglie(mass: f64, v_cm: f64) -> Result<f64> {
    require_positive("mass", mass)?;
    require_positive("v_cm", v_cm)?;
    Ok(PLANCK / (mass * v_cm))
}

/// λ²/(π·Ω0·t_int·λ_dB)·√(1 + δ²/Ω0²), m.
pub fn focal_length(lens: &LensSpec, mass: f64) -> Result<f64> {
    let dbw = de_broglie(mass, lens.v_cm)?;
    let ratio = lens.detuning / lens.omega0;
    Ok(lens.wavelength * lens.wavelength / (PI * lens.omega0 * lens.t_int * dbw) * (1.0 + ratio * ratio).sqrt())
}

/// γ = m·V_CM·σ0²/(ħR). R > 0 (diverging) gives γ > 0; R = ±∞ gives 0.
pub fn gamma_from_curvature(mass: f64, v_cm: f64, curvature_radius: f64, sigma0: f64) -> Result<f64> {
    require_positive("mass", mass)?;
    require_positive("v_cm", v_cm)?;
    require_positive("sigma0", sigma0)?;
    if curvature_radius == 0.0 || curvature_radius.is_nan() {
        return Err(Error::invalid("curvature_radius", "must be nonzero"));
    }
    Ok(mass * v_cm * sigma0 * sigma0 / (HBAR * curvature_radius))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lens(delta: f64) -> LensSpec {
        LensSpec::new(2.0 * PI * 50e6, 532e-9, delta, 100.0, 1e-6).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    #[test]
    fn rabi_profile_points() {
        let l = lens(0.0);
        assert_eq!(rabi_profile(&l, 0.0, 0.0), l.omega0());
        assert!(rabi_profile(&l, l.wavelength() / 4.0, 3e-5).abs() < 1e-9 * l.omega0());
        let z = l.v_cm() * l.t_int();
        assert!(rel(rabi_profile(&l, 0.0, z), l.omega0() * (-PI).exp()) < 1e-14);
    }

    #[test]
    fn potential_points() {
        let l = lens(0.0);
        let node = optical_potential(&l, l.wavelength() / 4.0, 0.0);
        assert!(node.full.abs() < 1e-9 * l.omega0());
        assert_eq!(optical_potential(&l, 0.0, 0.0).full, -l.omega0() / 2.0);
    }

    #[test]
    fn harmonic_companion_near_the_well() {
        let l = lens(0.0);
        let bottom = optical_potential(&l, 0.0, 0.0).full;
        for i in 1..=10 {
            let x = l.wavelength() / 50.0 * i as f64 / 10.0;
            let p = optical_potential(&l, x, 0.0);
            assert!(rel(p.full - bottom, p.harmonic) < 0.01, "x={x:e}");
        }
    }

    #[test]
    fn focal_length_dependencies() {
        let m = 1.2e-24;
        let base = focal_length(&lens(0.0), m).unwrap();
        let l = lens(0.0);
        let dbw = de_broglie(m, l.v_cm()).unwrap();
        let direct = l.wavelength().powi(2) / (PI * l.omega0() * l.t_int() * dbw);
        assert!(rel(base, direct) < 1e-14);
        let strong = LensSpec::new(2.0 * l.omega0(), 532e-9, 0.0, 100.0, 1e-6).unwrap();
        assert!(rel(base / focal_length(&strong, m).unwrap(), 2.0) < 1e-14);
        let detuned = lens(3f64.sqrt() * l.omega0());
        assert!(rel(focal_length(&detuned, m).unwrap() / base, 2.0) < 1e-14);
    }

    #[test]
    fn de_broglie_values() {
        assert!(rel(de_broglie(1.2e-24, 100.0).unwrap(), 5.52e-12) < 1e-3);
        assert!(rel(de_broglie(1.2e-24, 50.0).unwrap() / de_broglie(1.2e-24, 100.0).unwrap(), 2.0) < 1e-14);
        assert!(rel(de_broglie(0.6e-24, 100.0).unwrap() / de_broglie(1.2e-24, 100.0).unwrap(), 2.0) < 1e-14);
        assert!(de_broglie(0.0, 1.0).is_err());
    }

    #[test]
    fn curvature_map() {
        assert_eq!(gamma_from_curvature(1.2e-24, 100.0, f64::INFINITY, 7.8e-9).unwrap(), 0.0);
        assert!(gamma_from_curvature(1.2e-24, 100.0, 0.0, 7.8e-9).is_err());
        let a = gamma_from_curvature(1.2e-24, 100.0, 0.3, 7.8e-9).unwrap();
        let b = gamma_from_curvature(1.2e-24, 100.0, 0.3, 15.6e-9).unwrap();
        assert!(rel(b / a, 4.0) < 1e-14);
    }

    #[test]
    fn rejects_invalid_lens() {
        assert!(LensSpec::new(0.0, 1e-6, 0.0, 1.0, 1.0).is_err());
        assert!(LensSpec::new(1.0, -1e-6, 0.0, 1.0, 1.0).is_err());
        assert!(LensSpec::new(1.0, 1e-6, f64::NAN, 1.0, 1.0).is_err());
        assert!(LensSpec::new(1.0, 1e-6, 0.0, 0.0, 1.0).is_err());
        assert!(LensSpec::new(1.0, 1e-6, 0.0, 1.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn curvature_sign_and_inverse_law(r in prop_oneof![-1e3..-1e-6f64, 1e-6..1e3f64]) {
            let g = gamma_from_curvature(1.2e-24, 100.0, r, 7.8e-9).unwrap();
            prop_assert_eq!(g.signum(), r.signum());
            let k = gamma_from_curvature(1.2e-24, 100.0, 1.0, 7.8e-9).unwrap();
            prop_assert!(rel(g * r, k) < 1e-12);
        }

        #[test]
        fn profile_symmetries(x in -1e-5..1e-5f64, z in -1e-3..1e-3f64) {
            let l = lens(0.0);
            let base = rabi_profile(&l, x, z);
            prop_assert!((rabi_profile(&l, x + l.wavelength(), z) - base).abs() < 1e-6 * l.omega0());
            prop_assert_eq!(rabi_profile(&l, x, -z), base);
        }

        #[test]
        fn focal_length_monotone(scale in 1.01..10.0f64, delta in 0.0..1e9f64) {
            let m = 1.2e-24;
            let l = lens(delta);
            let f = focal_length(&l, m).unwrap();
            let brighter = LensSpec::new(l.omega0() * scale, l.wavelength(), delta, l.v_cm(), l.t_int()).unwrap();
            let longer = LensSpec::new(l.omega0(), l.wavelength(), delta, l.v_cm(), l.t_int() * scale).unwrap();
            let detuned = LensSpec::new(l.omega0(), l.wavelength(), delta * scale + 1e6, l.v_cm(), l.t_int()).unwrap();
            prop_assert!(focal_length(&brighter, m).unwrap() < f);
            prop_assert!(focal_length(&longer, m).unwrap() < f);
            prop_assert!(focal_length(&detuned, m).unwrap() > f);
        }
    }
}
