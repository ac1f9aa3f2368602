//! Central finite differences with Richardson extrapolation.
//!
//! The tableau uses steps `h`, `h/2`, `h/4`. Column one is the O(h²) central
//! difference, column two the 4th-order extrapolant, column three 6th order.
//! The spread between the last two columns is the convergence diagnostic.

use crate::error::{Error, Result};
use crate::numeric::real::Real;

/// Relative disagreement allowed between the last two extrapolation orders.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative<T> {
    pub value: T,
    /// |6th-order − 4th-order| estimate.
    pub spread: T,
}

/// Unchecked tableau. Returns the highest-order estimate and its spread.
pub fn central_richardson<T, F>(f: F, x: T, h: T) -> Derivative<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    let two = T::of(2.0);
    let central = |step: T| (f(x + step) - f(x - step)) / (two * step);

    let d1 = central(h);
    let d2 = central(h / two);
    let d4 = central(h / T::of(4.0));

    let r1a = (T::of(4.0) * d2 - d1) / T::of(3.0);
    let r1b = (T::of(4.0) * d4 - d2) / T::of(3.0);
    let r2 = (T::of(16.0) * r1b - r1a) / T::of(15.0);

    Derivative {
        value: r2,
        spread: (r2 - r1b).abs(),
    }
}

/// Checked derivative. Fails when the last two Richardson orders disagree by
/// more than `tolerance` relative, after allowing for rounding noise of order
/// `EPS · |f(x)| / h`.
pub fn derivative<T, F>(f: F, x: T, h: T, tolerance: f64) -> Result<Derivative<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    let fx = f(x).abs();
    let d = central_richardson(&f, x, h);

    let noise = T::of(1e4 * T::EPS) * fx / h.abs();
    let allowed = T::of(tolerance) * d.value.abs() + noise;
    if d.spread <= allowed {
        Ok(d)
    } else {
        Err(Error::DerivativeNotConverged {
            estimate: d.value.to_f64(),
            spread: d.spread.to_f64(),
        })
    }
}
