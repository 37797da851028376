//! Davydov D1 variational dynamics.
//!
//! The trial state is |D1⟩ = Σ_n α_n |n⟩ ⊗ |λ_n⟩ where |λ_n⟩ is a multimode
//! coherent state with b_q|λ_n⟩ = λ_nq|λ_n⟩. All quantities inside this module
//! use ħ = 1 and rad/fs.

mod deviation;
mod eom;
mod integrator;
mod state;
mod system;

pub use deviation::{deviation_amplitude, deviation_at, relative_deviation};
pub use eom::{debye_waller, debye_waller_matrix, eom_rhs, Derivative};
pub use integrator::{propagate, IntegratorConfig, Rk4, Trajectory, TrajectorySnapshot};
pub use state::D1State;
pub use system::{SinkSpec, System};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("non-finite amplitude at t = {time} fs, site {site}{}", mode.map(|q| format!(", mode {q}")).unwrap_or_default())]
    NonFinite { time: f64, site: usize, mode: Option<usize> },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid integrator setting {name} = {value}")]
    InvalidConfig { name: &'static str, value: f64 },
    #[error("time step {dt} fs gives {phase:.3} rad per step at the highest phonon frequency (limit 0.3)")]
    StepTooLarge { dt: f64, phase: f64 },
    #[error("invalid sink: {0}")]
    InvalidSink(String),
}
