//! Exciton-polaron dynamics in disordered molecular nanorings.
//!
//! The crate is organised along the physical pipeline:
//!
//! * [`model`] builds the ring geometry, the disordered exciton matrix and the
//!   dispersive phonon bath.
//! * [`statics`] diagonalizes exciton matrices and extracts localization and
//!   level-statistics measures.
//! * [`dynamics`] propagates the Davydov D1 variational state.
//! * [`observables`] turns trajectories into physical quantities.
//! * [`spectroscopy`] computes third-order response functions, 2D spectra and
//!   linear absorption.
//! * [`runner`] handles configuration, ensemble orchestration and output.
//!
//! Energies are carried in cm⁻¹ at the model level. Dynamics works internally
//! with ħ = 1 and angular frequencies in rad/fs (see [`units`]).

pub mod dynamics;
pub mod model;
pub mod observables;
pub mod rng;
pub mod runner;
pub mod spectroscopy;
pub mod statics;
pub mod units;

mod optimize;

pub use num_complex::Complex64 as C64;
