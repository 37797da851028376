//! Ring geometry, disordered exciton matrix and phonon bath.

mod bath;
mod disorder;
mod exciton;
mod geometry;

pub use bath::{build_phonon_bath, momentum_grid, PhononBath};
pub use disorder::{sample_disorder, DisorderShifts, DisorderSpec};
pub use exciton::{build_exciton_matrix, dipole_coupling, CouplingParams, ExcitonMatrix};
pub use geometry::{build_geometry, RingGeometry};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("number of sites must be even and at least 4, got {0}")]
    InvalidSiteCount(usize),
    #[error("radius must be positive, got {0} Å")]
    InvalidRadius(f64),
    #[error("distances must be positive, got ({0}, {1}) Å")]
    InvalidDistance(f64, f64),
    #[error("chord sum {chords:.4} Å exceeds circumference {circumference:.4} Å")]
    ChordsExceedCircumference { chords: f64, circumference: f64 },
    #[error("sites {0} and {1} coincide")]
    CoincidentSites(usize, usize),
    #[error("invalid parameter {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("shift arrays have length {got}, expected {expected}")]
    ShiftLength { got: usize, expected: usize },
}

/// A fully specified ring model: geometry plus exciton matrix.
#[derive(Debug, Clone)]
pub struct RingModel {
    pub geometry: RingGeometry,
    pub exciton: ExcitonMatrix,
    pub shifts: DisorderShifts,
}

impl RingModel {
    /// Build geometry, sample disorder and assemble K in one go.
    pub fn build(
        geometry: RingGeometry,
        coupling: &CouplingParams,
        disorder: &DisorderSpec,
    ) -> Result<Self, ModelError> {
        let shifts = sample_disorder(disorder, geometry.n_sites)?;
        let exciton = build_exciton_matrix(&geometry, coupling, &shifts)?;
        Ok(Self { geometry, exciton, shifts })
    }

    pub fn n_sites(&self) -> usize {
        self.geometry.n_sites
    }
}
