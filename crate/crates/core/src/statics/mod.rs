//! Exact diagonalization, eigenstate localization and level-spacing statistics.

mod brody;
mod spacing;
mod spectrum;

pub use brody::{beta_energy_map, brody_normalization, brody_pdf, fit_brody, BrodyFit, LevelStatistics, WindowFit, WindowSpec};
pub use spacing::{unfold_ensemble, SpacingEnsemble};
pub use spectrum::{diagonalize, ipr, ipr_spectrum, SpectralRealization};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StaticsError {
    #[error("exciton matrix is not symmetric: |K[{0},{1}] - K[{1},{0}]| = {2:e}")]
    NotSymmetric(usize, usize, f64),
    #[error("need at least 2 levels, got {0}")]
    TooFewLevels(usize),
    #[error("realizations have unequal dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("empty spacing sample")]
    EmptySample,
    #[error("invalid energy windows: {0}")]
    InvalidWindows(String),
}
