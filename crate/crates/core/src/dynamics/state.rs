use crate::C64;

/// Variational parameters at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct D1State {
    pub alpha: Vec<C64>,
    /// Row-major N × N_q: `lambda[n * n_modes + q]`.
    pub lambda: Vec<C64>,
    pub n_modes: usize,
    /// fs
    pub time: f64,
}

impl D1State {
    /// Exciton on `site`, undisplaced bath.
    pub fn localized(n_sites: usize, n_modes: usize, site: usize) -> Self {
        let mut alpha = vec![C64::new(0.0, 0.0); n_sites];
        alpha[site] = C64::new(1.0, 0.0);
        Self { alpha, lambda: vec![C64::new(0.0, 0.0); n_sites * n_modes], n_modes, time: 0.0 }
    }

    pub fn n_sites(&self) -> usize {
        self.alpha.len()
    }

    #[inline]
    pub fn lambda(&self, n: usize, q: usize) -> C64 {
        self.lambda[n * self.n_modes + q]
    }

    pub fn lambda_row(&self, n: usize) -> &[C64] {
        &self.lambda[n * self.n_modes..(n + 1) * self.n_modes]
    }

    /// Σ |α_n|²
    pub fn norm_sqr(&self) -> f64 {
        self.alpha.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.alpha.iter().map(|a| a.norm_sqr()).collect()
    }
}
