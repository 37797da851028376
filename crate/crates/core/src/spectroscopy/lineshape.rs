use super::SpectroscopyError;
use crate::units::{cm1_to_rad_fs, thermal_rad_fs};
use crate::C64;
use serde::{Deserialize, Serialize};

/// Drude–Lorentz bath for homogeneous line broadening.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathLineshapeParams {
    /// Reorganization energy, cm⁻¹.
    pub lambda0: f64,
    /// Relaxation rate, cm⁻¹.
    pub gamma0: f64,
    /// K
    pub temperature: f64,
    /// Stop the Matsubara sum once a term is this small relative to the sum.
    pub matsubara_tol: f64,
    pub matsubara_max: usize,
}

impl Default for BathLineshapeParams {
    fn default() -> Self {
        Self { lambda0: 100.0, gamma0: 35.0, temperature: 77.0, matsubara_tol: 1e-8, matsubara_max: 10_000 }
    }
}

impl BathLineshapeParams {
    pub fn validate(&self) -> Result<(), SpectroscopyError> {
        let bad = |name, value| Err(SpectroscopyError::InvalidLineshape { name, value });
        if !(self.lambda0 >= 0.0) || !self.lambda0.is_finite() {
            return bad("lambda0", self.lambda0);
        }
        if !(self.gamma0 > 0.0) || !self.gamma0.is_finite() {
            return bad("gamma0", self.gamma0);
        }
        if !(self.temperature > 0.0) || !self.temperature.is_finite() {
            return bad("temperature", self.temperature);
        }
        if !(self.matsubara_tol > 0.0) {
            return bad("matsubara_tol", self.matsubara_tol);
        }
        if self.matsubara_max == 0 {
            return bad("matsubara_max", 0.0);
        }
        Ok(())
    }
}

/// g(t) together with Matsubara convergence information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineshapeValue {
    pub g: C64,
    pub matsubara_terms: usize,
    /// False when the cap was hit before the tolerance.
    pub converged: bool,
    /// Relative size of the last term kept.
    pub achieved_tol: f64,
}

/// Line-broadening function g(t) for the Drude–Lorentz bath.
///
/// Closed form with the Matsubara series; once the terms are in their
/// asymptotic regime the remainder beyond the truncation point is added from
/// its integral estimate.
pub fn lineshape_g(t: f64, p: &BathLineshapeParams) -> Result<LineshapeValue, SpectroscopyError> {
    p.validate()?;
    if !(t >= 0.0) {
        return Err(SpectroscopyError::NegativeTime(t));
    }
    let lam = cm1_to_rad_fs(p.lambda0);
    let gam = cm1_to_rad_fs(p.gamma0);
    let kt = thermal_rad_fs(p.temperature);
    let beta = 1.0 / kt;
    let bracket = (-gam * t).exp() + gam * t - 1.0;
    let main = lam / gam * bracket;
    let cot = 1.0 / (0.5 * beta * gam).tan();
    let mut re = main * cot;
    if t == 0.0 || lam == 0.0 {
        return Ok(LineshapeValue { g: C64::new(re, -main), matsubara_terms: 0, converged: true, achieved_tol: 0.0 });
    }

    let nu1 = 2.0 * std::f64::consts::PI * kt;
    let pref = 4.0 * lam * gam * kt;
    let mut sum = 0.0;
    let mut n = 0;
    let mut last_rel = f64::INFINITY;
    let mut converged = false;
    while n < p.matsubara_max {
        n += 1;
        let nu = nu1 * n as f64;
        let term = ((-nu * t).exp() + nu * t - 1.0) / (nu * (nu * nu - gam * gam));
        sum += term;
        last_rel = (term / sum).abs();
        if last_rel < p.matsubara_tol {
            converged = true;
            break;
        }
    }
    // remainder Σ_{k>n} (ν_k t − 1)/(ν_k(ν_k² − γ²)) ≈ ∫_{n+½}^∞, valid once e^(−ν t) is negligible
    if nu1 * n as f64 * t > 40.0 {
        let l = n as f64 + 0.5;
        let a = nu1 * t;
        let c = (gam / nu1).powi(2);
        let tail = a * (1.0 / l + c / (3.0 * l.powi(3)) + c * c / (5.0 * l.powi(5)))
            - (1.0 / (2.0 * l * l) + c / (4.0 * l.powi(4)));
        sum += tail / nu1.powi(3);
    }
    re += pref * sum;
    Ok(LineshapeValue { g: C64::new(re, -main), matsubara_terms: n, converged, achieved_tol: last_rel })
}

/// The four cumulant lineshape factors F₁..F₄ from g at the six time
/// arguments.
pub fn lineshape_factors(g: impl Fn(f64) -> C64, tau: f64, tw: f64, t: f64) -> [C64; 4] {
    let (gt, gtau, gtw) = (g(t), g(tau), g(tw));
    let (gtwt, gtautw, gall) = (g(tw + t), g(tau + tw), g(tau + tw + t));
    factors_from(gt, gtau, gtw, gtwt, gtautw, gall)
}

fn factors_from(gt: C64, gtau: C64, gtw: C64, gtwt: C64, gtautw: C64, gall: C64) -> [C64; 4] {
    let c = |z: C64| z.conj();
    [
        (-c(gt) - gtau - c(gtw) + c(gtwt) + gtautw - gall).exp(),
        (-c(gt) - c(gtau) + gtw - gtwt - c(gtautw) + c(gall)).exp(),
        (-gt - c(gtau) + c(gtw) - c(gtwt) - c(gtautw) + c(gall)).exp(),
        (-gt - gtau - gtw + gtwt + gtautw - gall).exp(),
    ]
}

/// g(t) tabulated on k·step, k = 0..len.
#[derive(Debug, Clone)]
pub struct LineshapeTable {
    step: f64,
    values: Vec<C64>,
    pub all_converged: bool,
}

impl LineshapeTable {
    pub fn new(p: &BathLineshapeParams, step: f64, len: usize) -> Result<Self, SpectroscopyError> {
        let mut values = Vec::with_capacity(len + 1);
        let mut all_converged = true;
        for k in 0..=len {
            let v = lineshape_g(k as f64 * step, p)?;
            all_converged &= v.converged;
            values.push(v.g);
        }
        Ok(Self { step, values, all_converged })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn g(&self, k: usize) -> C64 {
        self.values[k]
    }

    /// F₁..F₄ at τ = kτ·step, T_w = kw·step, t = kt·step.
    pub fn factors(&self, k_tau: usize, k_tw: usize, k_t: usize) -> [C64; 4] {
        let g = |k: usize| self.values[k];
        factors_from(g(k_t), g(k_tau), g(k_tw), g(k_tw + k_t), g(k_tau + k_tw), g(k_tau + k_tw + k_t))
    }
}
