//! Physical observables derived from D1 states and trajectories.

mod density;
mod energy;
mod measures;
mod msd;
mod series;
mod steady;

pub use density::{reduced_density, ReducedDensityMatrix};
pub use energy::{energy_components, EnergyComponents};
pub use measures::{
    coherence_size, inverse_population_ratio, momentum_populations, phonon_displacement, sink_probability,
    superradiance_factor, PopulationRatio,
};
pub use msd::{fit_power_law, msd_series, DistanceMetric, PowerLawFit};
pub use series::{ObservableSeries, SERIES_NAMES};
pub use steady::{steady_state_summary, SteadyStateSummary, MEAN_COUPLING_CM1};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObservableError {
    #[error("density matrix has zero weight")]
    ZeroDensity,
    #[error("window [{lo}, {hi}] fs is not covered by the time grid [{t0}, {t1}] fs")]
    WindowOutsideGrid { lo: f64, hi: f64, t0: f64, t1: f64 },
    #[error("fit window holds {0} points, need at least 2")]
    TooFewPoints(usize),
    #[error("series length mismatch: {0}")]
    Length(String),
}
