use super::ObservableError;
use serde::Serialize;

/// Mean nearest-neighbour coupling used to express disorder as σ/J̄, cm⁻¹.
pub const MEAN_COUPLING_CM1: f64 = 542.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyStateSummary {
    /// Time-averaged coherence size.
    pub assc: f64,
    /// Time-averaged inverse population ratio.
    pub ass_ipr: f64,
    /// fs
    pub window: (f64, f64),
    pub sigma_over_j: f64,
}

/// Average L_c and IPR(ρ) over the samples whose time lies in `window`.
pub fn steady_state_summary(
    times: &[f64],
    coherence: &[f64],
    ipr: &[f64],
    window: (f64, f64),
    sigma_cm1: f64,
) -> Result<SteadyStateSummary, ObservableError> {
    if times.len() != coherence.len() || times.len() != ipr.len() {
        return Err(ObservableError::Length("steady-state inputs differ in length".into()));
    }
    let (lo, hi) = window;
    let (t0, t1) = (times.first().copied().unwrap_or(f64::NAN), times.last().copied().unwrap_or(f64::NAN));
    if !(lo >= t0 && hi <= t1 + 1e-9 && lo <= hi) {
        return Err(ObservableError::WindowOutsideGrid { lo, hi, t0, t1 });
    }
    let idx: Vec<usize> = (0..times.len()).filter(|&i| times[i] >= lo - 1e-9 && times[i] <= hi + 1e-9).collect();
    if idx.is_empty() {
        return Err(ObservableError::TooFewPoints(0));
    }
    let m = idx.len() as f64;
    Ok(SteadyStateSummary {
        assc: idx.iter().map(|&i| coherence[i]).sum::<f64>() / m,
        ass_ipr: idx.iter().map(|&i| ipr[i]).sum::<f64>() / m,
        window,
        sigma_over_j: sigma_cm1 / MEAN_COUPLING_CM1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn averages_inside_window() {
        let t: Vec<f64> = (0..=30).map(|i| i as f64 * 10.0).collect();
        let lc: Vec<f64> = t.iter().map(|&x| if x >= 150.0 { 5.0 } else { 1.0 }).collect();
        let s = steady_state_summary(&t, &lc, &lc, (150.0, 300.0), 100.0).unwrap();
        assert_eq!(s.assc, 5.0);
        assert!((s.sigma_over_j - 0.1845).abs() < 1e-3);
        assert!(steady_state_summary(&t, &lc, &lc, (150.0, 400.0), 0.0).is_err());
    }
}
