//! Position-momentum correlated Gaussian matter-wave probes under Markovian
//! scattering decoherence: purity dynamics, quantum and classical Fisher
//! information for the correlation γ and the coupling Λ, thermometry and the
//! temporal gain of information.

// `!(x >= 0.0)` is used on purpose throughout: NaN must fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod error;
pub mod fisher;
pub mod lens;
pub mod model;
pub mod numeric;
pub mod thermometry;

pub use error::{Error, Result};
