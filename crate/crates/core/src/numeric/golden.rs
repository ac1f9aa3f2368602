//! Golden-section maximization of a unimodal scalar function.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Maximizes `f` on `[lo, hi]` until the bracket is narrower than `tol`.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Maximum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;

    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }

    let x = 0.5 * (a + b);
    Maximum {
        x,
        value: f(x),
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_vertex() {
        let m = golden_section_max(|x| -(x - 1.25).powi(2) + 3.0, -4.0, 10.0, 1e-10);
        // Near the vertex f is flat to rounding once |x − x*| < ~√ε.
        assert!((m.x - 1.25).abs() < 1e-7);
        assert!((m.value - 3.0).abs() < 1e-15);
    }

    #[test]
    fn reversed_bracket() {
        let m = golden_section_max(|x: f64| (-x * x).exp(), 2.0, -3.0, 1e-9);
        assert!(m.x.abs() < 1e-8);
    }

    #[test]
    fn iteration_count_is_logarithmic() {
        let m = golden_section_max(|x: f64| -(x - 0.3).abs(), 0.0, 1.0, 1e-6);
        // ceil(ln(1e6) / ln(phi)) = 29
        assert!(m.iterations <= 30, "{}", m.iterations);
    }
}
