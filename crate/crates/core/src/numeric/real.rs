//! Scalar abstraction shared by the `f64` formulas and their double-double
//! evaluation in the finite-difference oracles.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use qd::Quad;

/// Double-double scalar (~32 significant digits).
pub type DoubleDouble = Quad;

pub trait Real:
    Copy
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Unit roundoff of the representation.
    const EPS: f64;

    fn of(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn exp(self) -> Self;

    fn zero() -> Self {
        Self::of(0.0)
    }

    fn one() -> Self {
        Self::of(1.0)
    }

    fn square(self) -> Self {
        self * self
    }
}

impl Real for f64 {
    const EPS: f64 = f64::EPSILON;

    fn of(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
}

impl Real for Quad {
    // 2^-104
    const EPS: f64 = 4.930_380_657_631_324e-32;

    fn of(x: f64) -> Self {
        Quad::from(x)
    }
    fn to_f64(self) -> f64 {
        self.0 + self.1
    }
    fn sqrt(self) -> Self {
        Quad::sqrt(self)
    }
    fn abs(self) -> Self {
        Quad::abs(self)
    }
    fn exp(self) -> Self {
        Quad::exp(self)
    }
}
