//! Numerical building blocks: scalar abstraction, Richardson differentiation,
//! golden-section search and quadrature.

pub mod golden;
pub mod quad;
pub mod real;
pub mod richardson;

pub use golden::{golden_section_max, Maximum};
pub use real::{DoubleDouble, Real};
pub use richardson::{central_richardson, derivative, Derivative};

/// `points` values evenly spaced from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        n => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// `points` values log-spaced from `lo` to `hi` inclusive (both > 0).
pub fn logspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let n = points;
    linspace(lo.ln(), hi.ln(), n)
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            if i == 0 {
                lo
            } else if i + 1 == n {
                hi
            } else {
                l.exp()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spaces_hit_endpoints() {
        let l = linspace(-150.0, 150.0, 301);
        assert_eq!(l.len(), 301);
        assert_eq!(l[0], -150.0);
        assert_eq!(l[150], 0.0);
        assert_eq!(l[300], 150.0);

        let g = logspace(1e-9, 1e-2, 8);
        assert_eq!(g[0], 1e-9);
        assert_eq!(g[7], 1e-2);
        assert!((g[3] / 1e-6 - 1.0).abs() < 1e-12);
    }
}
