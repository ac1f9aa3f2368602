//! Relative-tolerance front end for the double-exponential integrator.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u32,
}

/// Integrates `f` over `[a, b]` to `rel_tol` relative accuracy.
///
/// A coarse pass fixes the magnitude of the integral; the refined pass then
/// targets `rel_tol · |coarse|` absolute error.
pub fn integrate<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    let coarse = quadrature::integrate(&f, a, b, 1e-3 * (b - a).abs());
    let scale = coarse.integral.abs();
    if scale == 0.0 {
        return Ok(Integral {
            value: 0.0,
            error_estimate: coarse.error_estimate,
            evaluations: coarse.num_function_evaluations,
        });
    }

    let target = rel_tol * scale;
    let fine = quadrature::integrate(&f, a, b, target);
    if !(fine.error_estimate <= target) {
        return Err(Error::QuadratureTolerance {
            error_estimate: fine.error_estimate,
        });
    }
    Ok(Integral {
        value: fine.integral,
        error_estimate: fine.error_estimate,
        evaluations: coarse.num_function_evaluations + fine.num_function_evaluations,
    })
}
