//! Linear and 2D photon-echo spectra from propagated D1 amplitudes.
//!
//! Response functions are evaluated in the impulsive limit with one-exciton
//! pathways only. Homogeneous broadening from a Drude–Lorentz bath enters
//! through second-order cumulant lineshape factors.

mod amplitude;
mod lineshape;
mod orientation;
mod response;
mod spectrum;

pub use amplitude::{build_amplitude_table, AmplitudeTable, AmplitudeTableConfig};
pub use lineshape::{lineshape_factors, lineshape_g, BathLineshapeParams, LineshapeTable, LineshapeValue};
pub use orientation::{orientation_factor, OrientationTensor};
pub use response::{response_functions, ResponseConfig, ResponseGrid};
pub use spectrum::{fwhm, linear_absorption, peak, spectrum_2d, Absorption, Spectra2D, Spectrum2D, SpectrumKind};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectroscopyError {
    #[error("invalid lineshape parameter {name} = {value}")]
    InvalidLineshape { name: &'static str, value: f64 },
    #[error("negative time {0} fs")]
    NegativeTime(f64),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("amplitude table propagation failed: {0}")]
    Propagation(#[from] crate::dynamics::DynamicsError),
}
