//! Probe and environment descriptions and the evolved Gaussian state.

pub mod covariance;
pub mod environment;
pub mod kernel;
pub mod probe;
pub mod purity;
pub(crate) mod state;

pub use covariance::{covariance, CovarianceMatrix};
pub use environment::{EnvironmentSpec, ThermalSource};
pub use kernel::{kernel_params, KernelCombinations, KernelParams};
pub use probe::{gamma_from_pearson, pearson_from_gamma, tau0, Coherence, ProbeSpec};
pub use purity::{
    position_density_variance, purity_approx, purity_bracket, purity_exact,
    purity_from_covariance, PurityBracket,
};
