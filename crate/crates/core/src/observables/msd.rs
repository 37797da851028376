use super::ObservableError;
use crate::model::RingGeometry;
use crate::units::ANGSTROM_PER_NM;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMetric {
    /// Straight line through the ring plane.
    #[default]
    Chord,
    /// Along the ring.
    Arc,
}

/// MSD(t) = Σ_n d_n² ρ_nn(t) in nm², one entry per population row.
pub fn msd_series(populations: &[Vec<f64>], geometry: &RingGeometry, initial_site: usize, metric: DistanceMetric) -> Vec<f64> {
    let d2: Vec<f64> = (0..geometry.n_sites)
        .map(|n| {
            let d = match metric {
                DistanceMetric::Chord => geometry.distance(n, initial_site),
                DistanceMetric::Arc => geometry.arc_distance(n, initial_site),
            } / ANGSTROM_PER_NM;
            d * d
        })
        .collect();
    populations.iter().map(|p| p.iter().zip(&d2).map(|(a, b)| a * b).sum()).collect()
}

/// MSD ≈ D·t^γ
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    /// nm²/fs^γ
    pub prefactor: f64,
    pub exponent: f64,
    pub n_points: usize,
}

/// Least-squares line through (ln t, ln MSD) for t inside `window` (fs,
/// inclusive).
pub fn fit_power_law(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<PowerLawFit, ObservableError> {
    if times.len() != values.len() {
        return Err(ObservableError::Length(format!("{} times, {} values", times.len(), values.len())));
    }
    let (lo, hi) = window;
    let (t0, t1) = (times.first().copied().unwrap_or(f64::NAN), times.last().copied().unwrap_or(f64::NAN));
    if !(lo >= t0 && hi <= t1 + 1e-9 && lo < hi) {
        return Err(ObservableError::WindowOutsideGrid { lo, hi, t0, t1 });
    }
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(&t, &v)| t >= lo - 1e-9 && t <= hi + 1e-9 && t > 0.0 && v > 0.0)
        .map(|(&t, &v)| (t.ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(ObservableError::TooFewPoints(pts.len()));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(PowerLawFit { prefactor: (my - slope * mx).exp(), exponent: slope, n_points: pts.len() })
}
