use super::{SpectralRealization, StaticsError};

/// Pooled nearest-neighbour spacings after ensemble unfolding.
#[derive(Debug, Clone)]
pub struct SpacingEnsemble {
    /// Flat, realization-major: realization r contributes entries
    /// `r*(n-1) .. (r+1)*(n-1)`.
    pub unfolded_spacings: Vec<f64>,
    /// Ensemble mean of E_{i+1} − E_i at each level index, cm⁻¹.
    pub per_level_mean_spacing: Vec<f64>,
    /// First and last level index covered by the spacings.
    pub level_index_range: (usize, usize),
    /// Midpoint energy (E_i + E_{i+1})/2 of every spacing, same order.
    pub midpoints: Vec<f64>,
}

impl SpacingEnsemble {
    pub fn mean(&self) -> f64 {
        self.unfolded_spacings.iter().sum::<f64>() / self.unfolded_spacings.len() as f64
    }
}

/// Unfold by the ensemble mean spacing at each level index.
///
/// Level indices whose ensemble mean spacing is negligible against the global
/// mean (exact degeneracies) yield unfolded spacing 0.
pub fn unfold_ensemble(realizations: &[SpectralRealization]) -> Result<SpacingEnsemble, StaticsError> {
    let n = realizations.first().map(|r| r.n()).unwrap_or(0);
    if n < 2 {
        return Err(StaticsError::TooFewLevels(n));
    }
    if let Some(r) = realizations.iter().find(|r| r.n() != n) {
        return Err(StaticsError::DimensionMismatch(n, r.n()));
    }
    let count = realizations.len() as f64;
    let mut mean = vec![0.0; n - 1];
    for r in realizations {
        for (i, m) in mean.iter_mut().enumerate() {
            *m += r.energies[i + 1] - r.energies[i];
        }
    }
    mean.iter_mut().for_each(|m| *m /= count);
    let global = mean.iter().sum::<f64>() / (n - 1) as f64;
    let floor = 1e-10 * global.abs();

    let mut unfolded = Vec::with_capacity(realizations.len() * (n - 1));
    let mut midpoints = Vec::with_capacity(unfolded.capacity());
    for r in realizations {
        for i in 0..n - 1 {
            let s = r.energies[i + 1] - r.energies[i];
            unfolded.push(if mean[i] > floor { s / mean[i] } else { 0.0 });
            midpoints.push(0.5 * (r.energies[i + 1] + r.energies[i]));
        }
    }
    Ok(SpacingEnsemble {
        unfolded_spacings: unfolded,
        per_level_mean_spacing: mean,
        level_index_range: (0, n - 1),
        midpoints,
    })
}
