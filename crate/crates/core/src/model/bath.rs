use super::ModelError;
use std::f64::consts::PI;

/// Dispersive Holstein bath with one mode per ring momentum.
///
/// Frequencies are in cm⁻¹, couplings dimensionless.
#[derive(Debug, Clone, PartialEq)]
pub struct PhononBath {
    pub n_modes: usize,
    pub omega0: f64,
    pub bandwidth: f64,
    pub huang_rhys: f64,
    pub q_grid: Vec<f64>,
    pub omega_q: Vec<f64>,
    pub g_q: Vec<f64>,
}

impl PhononBath {
    /// Reorganization energy S·ω₀ in cm⁻¹.
    pub fn reorganization_energy(&self) -> f64 {
        self.huang_rhys * self.omega0
    }

    /// (1/N) Σ g² ω, which equals S·ω₀ by construction.
    pub fn coupling_sum(&self) -> f64 {
        let n = self.n_modes as f64;
        self.g_q.iter().zip(&self.omega_q).map(|(g, w)| g * g * w).sum::<f64>() / n
    }
}

/// q_i = (2π/N)(−N/2 + i + 1)
pub fn momentum_grid(n: usize) -> Vec<f64> {
    let nf = n as f64;
    (0..n).map(|i| 2.0 * PI / nf * (-(nf / 2.0) + i as f64 + 1.0)).collect()
}

/// Linear dispersion ω_q = ω₀ + 2Wω₀(|q|/π − 1/2) with elliptic coupling
/// profile g_q² ∝ √((Wω₀)² − (ω_q − ω₀)²)/ω_q², rescaled so that
/// (1/N) Σ g_q² ω_q = S ω₀. When the profile vanishes on every grid point
/// (W = 0, or a grid made only of band edges) all modes get equal weight.
pub fn build_phonon_bath(n: usize, omega0: f64, bandwidth: f64, huang_rhys: f64) -> Result<PhononBath, ModelError> {
    if n == 0 {
        return Err(ModelError::InvalidSiteCount(n));
    }
    if !(omega0 > 0.0) || !omega0.is_finite() {
        return Err(ModelError::InvalidParameter { name: "omega0", value: omega0 });
    }
    if !(0.0..=1.0).contains(&bandwidth) {
        return Err(ModelError::InvalidParameter { name: "bandwidth", value: bandwidth });
    }
    if !(huang_rhys >= 0.0) || !huang_rhys.is_finite() {
        return Err(ModelError::InvalidParameter { name: "huang_rhys", value: huang_rhys });
    }
    let q_grid = momentum_grid(n);
    let half_width = bandwidth * omega0;
    let omega_q: Vec<f64> = q_grid.iter().map(|q| omega0 + 2.0 * half_width * (q.abs() / PI - 0.5)).collect();

    let mut weight: Vec<f64> = omega_q
        .iter()
        .map(|&w| {
            let x = half_width * half_width - (w - omega0) * (w - omega0);
            if x > 0.0 { x.sqrt() / (w * w) } else { 0.0 }
        })
        .collect();
    if weight.iter().all(|&w| w == 0.0) {
        weight = omega_q.iter().map(|w| 1.0 / (w * w)).collect();
    }
    let nf = n as f64;
    let raw: f64 = weight.iter().zip(&omega_q).map(|(u, w)| u * w).sum::<f64>() / nf;
    let scale = huang_rhys * omega0 / raw;
    let g_q = weight.iter().map(|u| (u * scale).sqrt()).collect();

    Ok(PhononBath { n_modes: n, omega0, bandwidth, huang_rhys, q_grid, omega_q, g_q })
}
