use super::ModelError;
use crate::rng::{keyed_rng, StreamId};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Gaussian static disorder on site energies and nearest-neighbour bonds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    /// cm⁻¹
    pub sigma_e: f64,
    /// cm⁻¹
    pub sigma_j: f64,
    pub seed: u64,
    pub realization_index: u64,
}

impl DisorderSpec {
    pub fn clean() -> Self {
        Self { sigma_e: 0.0, sigma_j: 0.0, seed: 0, realization_index: 0 }
    }
}

/// Sampled shifts for one realization, in cm⁻¹.
///
/// `bond[i]` perturbs the bond between sites `i` and `i+1 mod N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderShifts {
    pub site: Vec<f64>,
    pub bond: Vec<f64>,
}

impl DisorderShifts {
    pub fn zeros(n: usize) -> Self {
        Self { site: vec![0.0; n], bond: vec![0.0; n] }
    }
}

fn draws(sigma: f64, n: usize, spec: &DisorderSpec, stream: StreamId) -> Vec<f64> {
    if sigma == 0.0 {
        return vec![0.0; n];
    }
    let mut rng = keyed_rng(spec.seed, spec.realization_index, stream);
    (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            sigma * z
        })
        .collect()
}

pub fn sample_disorder(spec: &DisorderSpec, n_sites: usize) -> Result<DisorderShifts, ModelError> {
    for (name, value) in [("sigma_e", spec.sigma_e), ("sigma_j", spec.sigma_j)] {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(ModelError::InvalidParameter { name, value });
        }
    }
    Ok(DisorderShifts {
        site: draws(spec.sigma_e, n_sites, spec, StreamId::SiteEnergy),
        bond: draws(spec.sigma_j, n_sites, spec, StreamId::BondCoupling),
    })
}
