use super::{ResponseGrid, SpectroscopyError};
use crate::C64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Rephasing,
    NonRephasing,
    Total,
}

/// Real 2D spectrum on (ω_τ, ω_t) in ω₀ units; `intensity[i * omega_t.len() + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2D {
    pub omega_tau: Vec<f64>,
    pub omega_t: Vec<f64>,
    pub intensity: Vec<f64>,
    pub kind: SpectrumKind,
}

impl Spectrum2D {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.intensity[i * self.omega_t.len() + j]
    }

    /// (ω_τ, ω_t, value) of the global maximum.
    pub fn peak(&self) -> (f64, f64, f64) {
        let nt = self.omega_t.len();
        let (idx, v) = self
            .intensity
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (k, x)| if x > acc.1 { (k, x) } else { acc });
        (self.omega_tau[idx / nt], self.omega_t[idx % nt], v)
    }

    /// Bilinear interpolation; `None` outside the grid.
    pub fn interpolate(&self, w_tau: f64, w_t: f64) -> Option<f64> {
        let (i, fi) = locate(&self.omega_tau, w_tau)?;
        let (j, fj) = locate(&self.omega_t, w_t)?;
        let i1 = (i + 1).min(self.omega_tau.len() - 1);
        let j1 = (j + 1).min(self.omega_t.len() - 1);
        let v00 = self.at(i, j);
        let v01 = self.at(i, j1);
        let v10 = self.at(i1, j);
        let v11 = self.at(i1, j1);
        Some((1.0 - fi) * ((1.0 - fj) * v00 + fj * v01) + fi * ((1.0 - fj) * v10 + fj * v11))
    }
}

fn locate(grid: &[f64], x: f64) -> Option<(usize, f64)> {
    let n = grid.len();
    if n == 0 || x < grid[0] || x > grid[n - 1] {
        return None;
    }
    if n == 1 {
        return Some((0, 0.0));
    }
    let k = grid.partition_point(|&g| g <= x).clamp(1, n - 1) - 1;
    let f = (x - grid[k]) / (grid[k + 1] - grid[k]);
    Some((k, f))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectra2D {
    pub rephasing: Spectrum2D,
    pub nonrephasing: Spectrum2D,
    pub total: Spectrum2D,
}

/// Linear absorption line in ω₀ units, normalized to unit maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct Absorption {
    pub omega: Vec<f64>,
    pub intensity: Vec<f64>,
}

impl Absorption {
    pub fn peak(&self) -> Option<(f64, f64)> {
        peak(&self.omega, &self.intensity)
    }
    pub fn fwhm(&self) -> Option<f64> {
        fwhm(&self.omega, &self.intensity)
    }
}

/// Zero-padded double Fourier transform of the response grid.
///
/// Rephasing (R₂+R₃) uses the kernel e^{−iω_τ τ} e^{+iω_t t}, non-rephasing (R₁+R₄)
/// uses e^{+iω_τ τ} e^{+iω_t t}, so a transition at energy ε lands at ω_τ = ω_t = ε in
/// both. Zero-time samples carry half weight. `omega0` is in rad/fs.
pub fn spectrum_2d(grid: &ResponseGrid, omega0: f64, pad: usize) -> Result<Spectra2D, SpectroscopyError> {
    let (nx, ny) = (grid.n_tau(), grid.n_t());
    if nx < 2 || ny < 2 || grid.r1.len() != nx * ny {
        return Err(SpectroscopyError::GridMismatch("response grid needs at least 2×2 points".into()));
    }
    if !(omega0 > 0.0) || pad == 0 {
        return Err(SpectroscopyError::InvalidLineshape { name: "omega0/pad", value: omega0 });
    }
    let step = grid.step();
    let uniform = |g: &[f64]| g.windows(2).all(|w| ((w[1] - w[0]) - step).abs() <= 1e-9 * step);
    if !(step > 0.0) || !uniform(&grid.tau_grid) || !uniform(&grid.t_grid) {
        return Err(SpectroscopyError::GridMismatch("grids must be uniform with a shared step".into()));
    }

    let (px, py) = (pad * nx, pad * ny);
    let mut planner = FftPlanner::<f64>::new();
    let fwd_x = planner.plan_fft_forward(px);
    let inv_x = planner.plan_fft_inverse(px);
    let inv_y = planner.plan_fft_inverse(py);

    let weight = |i: usize, j: usize| {
        let wi = if i == 0 { 0.5 } else { 1.0 };
        let wj = if j == 0 { 0.5 } else { 1.0 };
        wi * wj * step * step
    };
    let reph_data: Vec<C64> = (0..nx * ny).map(|k| (grid.r2[k] + grid.r3[k]) * weight(k / ny, k % ny)).collect();
    let nonr_data: Vec<C64> = (0..nx * ny).map(|k| (grid.r1[k] + grid.r4[k]) * weight(k / ny, k % ny)).collect();

    let reph = transform(&reph_data, nx, ny, px, py, &fwd_x, &inv_y);
    let nonr = transform(&nonr_data, nx, ny, px, py, &inv_x, &inv_y);

    let axis = |p: usize| -> Vec<f64> {
        let dw = 2.0 * std::f64::consts::PI / (p as f64 * step) / omega0;
        (1..p).map(|k| (k as f64 - (p / 2) as f64) * dw).collect()
    };
    let (omega_tau, omega_t) = (axis(px), axis(py));
    let shifted = |data: &[C64]| -> Vec<f64> {
        let mut out = Vec::with_capacity((px - 1) * (py - 1));
        for a in 1..px {
            let i = (a + px - px / 2) % px;
            for b in 1..py {
                let j = (b + py - py / 2) % py;
                out.push(data[i * py + j].re);
            }
        }
        out
    };
    let reph_re = shifted(&reph);
    let nonr_re = shifted(&nonr);
    let total: Vec<f64> = reph_re.iter().zip(&nonr_re).map(|(a, b)| a + b).collect();
    let make = |intensity, kind| Spectrum2D { omega_tau: omega_tau.clone(), omega_t: omega_t.clone(), intensity, kind };
    Ok(Spectra2D {
        rephasing: make(reph_re, SpectrumKind::Rephasing),
        nonrephasing: make(nonr_re, SpectrumKind::NonRephasing),
        total: make(total, SpectrumKind::Total),
    })
}

fn transform(
    data: &[C64],
    nx: usize,
    ny: usize,
    px: usize,
    py: usize,
    fx: &Arc<dyn Fft<f64>>,
    fy: &Arc<dyn Fft<f64>>,
) -> Vec<C64> {
    let zero = C64::new(0.0, 0.0);
    let mut buf = vec![zero; px * py];
    for i in 0..nx {
        let row = &mut buf[i * py..(i + 1) * py];
        row[..ny].copy_from_slice(&data[i * ny..(i + 1) * ny]);
        fy.process(row);
    }
    let mut col = vec![zero; px];
    for j in 0..py {
        for i in 0..px {
            col[i] = buf[i * py + j];
        }
        fx.process(&mut col);
        for i in 0..px {
            buf[i * py + j] = col[i];
        }
    }
    buf
}

/// Diagonal ω_τ = ω_t slice on the ω_t grid, normalized to unit maximum.
pub fn linear_absorption(spectrum: &Spectrum2D) -> Absorption {
    let (omega, mut intensity): (Vec<f64>, Vec<f64>) = spectrum
        .omega_t
        .iter()
        .filter_map(|&w| spectrum.interpolate(w, w).map(|v| (w, v)))
        .unzip();
    let max = intensity.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max > 0.0 {
        intensity.iter_mut().for_each(|v| *v /= max);
    }
    Absorption { omega, intensity }
}

/// Position and value of the maximum.
pub fn peak(omega: &[f64], intensity: &[f64]) -> Option<(f64, f64)> {
    omega
        .iter()
        .zip(intensity)
        .fold(None, |acc: Option<(f64, f64)>, (&w, &v)| match acc {
            Some((_, best)) if best >= v => acc,
            _ if v.is_finite() => Some((w, v)),
            _ => acc,
        })
}

/// Full width at half maximum around the global peak, with linear interpolation of
/// the crossings. `None` if the line does not fall below half height on both sides.
pub fn fwhm(omega: &[f64], intensity: &[f64]) -> Option<f64> {
    if omega.len() != intensity.len() || omega.len() < 3 {
        return None;
    }
    let (k, _) = intensity
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc });
    let half = 0.5 * intensity[k];
    if !(half > 0.0) {
        return None;
    }
    let cross = |a: usize, b: usize| {
        let f = (half - intensity[a]) / (intensity[b] - intensity[a]);
        omega[a] + f * (omega[b] - omega[a])
    };
    let left = (0..k).rev().find(|&i| intensity[i] < half).map(|i| cross(i, i + 1))?;
    let right = (k + 1..omega.len()).find(|&i| intensity[i] < half).map(|i| cross(i - 1, i))?;
    Some(right - left)
}
