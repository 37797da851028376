use super::{SpacingEnsemble, StaticsError};
use crate::optimize::golden_section_max;
use serde::Serialize;
use statrs::function::gamma::gamma;

const BETA_MAX: f64 = 1.2;
const BETA_TOL: f64 = 1e-4;
const S_FLOOR: f64 = 1e-12;
/// Windows with fewer spacings are reported but not fitted.
pub const MIN_WINDOW_SPACINGS: usize = 500;

/// A(β) = Γ((β+2)/(β+1))^(β+1)
pub fn brody_normalization(beta: f64) -> f64 {
    gamma((beta + 2.0) / (beta + 1.0)).powf(beta + 1.0)
}

/// P(s) = (β+1) A s^β exp(−A s^(β+1))
pub fn brody_pdf(s: f64, beta: f64) -> f64 {
    let a = brody_normalization(beta);
    (beta + 1.0) * a * s.powf(beta) * (-a * s.powf(beta + 1.0)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelStatistics {
    Diffusive,
    Intermediate,
    Localized,
}

impl LevelStatistics {
    pub fn classify(beta: f64) -> Self {
        if beta > 0.9 {
            Self::Diffusive
        } else if beta >= 0.5 {
            Self::Intermediate
        } else {
            Self::Localized
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Diffusive => "diffusive",
            Self::Intermediate => "intermediate",
            Self::Localized => "localized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BrodyFit {
    pub beta: f64,
    pub normalization_a: f64,
    pub log_likelihood: f64,
    pub n_samples: usize,
}

impl BrodyFit {
    pub fn class(&self) -> LevelStatistics {
        LevelStatistics::classify(self.beta)
    }
}

fn log_likelihood(sample: &[f64], sum_log_s: f64, beta: f64) -> f64 {
    let a = brody_normalization(beta);
    let n = sample.len() as f64;
    let tail: f64 = sample.iter().map(|&s| s.max(S_FLOOR).powf(beta + 1.0)).sum();
    n * (a.ln() + (beta + 1.0).ln()) + beta * sum_log_s - a * tail
}

/// Maximum-likelihood Brody parameter on [0, 1.2].
pub fn fit_brody(sample: &[f64]) -> Result<BrodyFit, StaticsError> {
    if sample.is_empty() {
        return Err(StaticsError::EmptySample);
    }
    let sum_log_s: f64 = sample.iter().map(|&s| s.max(S_FLOOR).ln()).sum();
    let beta = golden_section_max(|b| log_likelihood(sample, sum_log_s, b), 0.0, BETA_MAX, BETA_TOL);
    Ok(BrodyFit {
        beta,
        normalization_a: brody_normalization(beta),
        log_likelihood: log_likelihood(sample, sum_log_s, beta),
        n_samples: sample.len(),
    })
}

/// How to partition the spectrum into energy windows.
#[derive(Debug, Clone, PartialEq)]
pub enum WindowSpec {
    /// Equal-population bins of the spacing midpoint energies.
    Quantile(usize),
    /// Explicit ascending edges in cm⁻¹.
    Edges(Vec<f64>),
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self::Quantile(8)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowFit {
    /// cm⁻¹
    pub lo: f64,
    /// cm⁻¹
    pub hi: f64,
    pub n_spacings: usize,
    /// `None` when the window holds fewer than [`MIN_WINDOW_SPACINGS`].
    pub fit: Option<BrodyFit>,
}

impl WindowFit {
    pub fn class(&self) -> Option<LevelStatistics> {
        self.fit.map(|f| f.class())
    }
}

fn window_edges(midpoints: &[f64], spec: &WindowSpec) -> Result<Vec<f64>, StaticsError> {
    match spec {
        WindowSpec::Quantile(k) => {
            if *k == 0 {
                return Err(StaticsError::InvalidWindows("zero quantile bins".into()));
            }
            let mut sorted = midpoints.to_vec();
            sorted.sort_by(f64::total_cmp);
            let m = sorted.len();
            let mut edges: Vec<f64> = (0..*k).map(|i| sorted[i * m / k]).collect();
            edges.push(sorted[m - 1]);
            Ok(edges)
        }
        WindowSpec::Edges(e) => {
            if e.len() < 2 || e.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(StaticsError::InvalidWindows("edges must be strictly ascending".into()));
            }
            Ok(e.clone())
        }
    }
}

/// Brody fit per energy window. A spacing belongs to the window containing its
/// midpoint energy; windows are half-open except the last.
pub fn beta_energy_map(ensemble: &SpacingEnsemble, windows: &WindowSpec) -> Result<Vec<WindowFit>, StaticsError> {
    if ensemble.unfolded_spacings.is_empty() {
        return Err(StaticsError::EmptySample);
    }
    let edges = window_edges(&ensemble.midpoints, windows)?;
    let nw = edges.len() - 1;
    let mut bins: Vec<Vec<f64>> = vec![Vec::new(); nw];
    for (&s, &e) in ensemble.unfolded_spacings.iter().zip(&ensemble.midpoints) {
        let idx = edges.partition_point(|&x| x <= e);
        let w = if idx == 0 {
            continue;
        } else if idx > nw {
            if e == edges[nw] { nw - 1 } else { continue }
        } else {
            idx - 1
        };
        bins[w].push(s);
    }
    bins.into_iter()
        .enumerate()
        .map(|(w, sample)| {
            let fit = if sample.len() >= MIN_WINDOW_SPACINGS { Some(fit_brody(&sample)?) } else { None };
            Ok(WindowFit { lo: edges[w], hi: edges[w + 1], n_spacings: sample.len(), fit })
        })
        .collect()
}
