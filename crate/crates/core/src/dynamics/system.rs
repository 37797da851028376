use super::DynamicsError;
use crate::model::{ExcitonMatrix, PhononBath};
use crate::units::cm1_to_rad_fs;
use crate::C64;
use nalgebra::DMatrix;

/// Non-Hermitian sink −i(γ/2)Q̂.
#[derive(Debug, Clone, PartialEq)]
pub struct SinkSpec {
    /// Rate in units of ω₀.
    pub gamma: f64,
    pub q_matrix: DMatrix<f64>,
}

impl SinkSpec {
    /// Projector onto a single trapping site.
    pub fn site(n_sites: usize, site: usize, gamma: f64) -> Self {
        let mut q = DMatrix::zeros(n_sites, n_sites);
        q[(site, site)] = 1.0;
        Self { gamma, q_matrix: q }
    }
}

/// Exciton matrix, bath and sink converted to rad/fs, ready for propagation.
#[derive(Debug, Clone)]
pub struct System {
    n: usize,
    nq: usize,
    omega0: f64,
    reference: f64,
    k: Vec<f64>,
    omega: Vec<f64>,
    drive: Vec<C64>,
    sink_gamma: f64,
    sink_q: Vec<f64>,
    eps: f64,
}

impl System {
    pub fn new(exciton: &ExcitonMatrix, bath: &PhononBath) -> Result<Self, DynamicsError> {
        let n = exciton.n();
        let nq = bath.n_modes;
        if n == 0 {
            return Err(DynamicsError::Dimension("empty exciton matrix".into()));
        }
        let k = (0..n * n).map(|i| cm1_to_rad_fs(exciton.k[(i / n, i % n)])).collect();
        let omega: Vec<f64> = bath.omega_q.iter().map(|&w| cm1_to_rad_fs(w)).collect();
        let scale = 1.0 / (n as f64).sqrt();
        let mut drive = Vec::with_capacity(n * nq);
        for site in 0..n {
            for q in 0..nq {
                let phase = C64::from_polar(1.0, -bath.q_grid[q] * site as f64);
                drive.push(phase * (scale * omega[q] * bath.g_q[q]));
            }
        }
        Ok(Self {
            n,
            nq,
            omega0: cm1_to_rad_fs(bath.omega0),
            reference: 0.0,
            k,
            omega,
            drive,
            sink_gamma: 0.0,
            sink_q: vec![0.0; n * n],
            eps: 1e-8,
        })
    }

    pub fn with_sink(mut self, sink: &SinkSpec) -> Result<Self, DynamicsError> {
        let q = &sink.q_matrix;
        if q.nrows() != self.n || q.ncols() != self.n {
            return Err(DynamicsError::InvalidSink(format!("Q is {}×{}, expected {n}×{n}", q.nrows(), q.ncols(), n = self.n)));
        }
        if !(sink.gamma >= 0.0) || !sink.gamma.is_finite() {
            return Err(DynamicsError::InvalidSink(format!("gamma = {}", sink.gamma)));
        }
        if (q - q.transpose()).abs().max() > 0.0 {
            return Err(DynamicsError::InvalidSink("Q must be symmetric".into()));
        }
        self.sink_gamma = sink.gamma * self.omega0;
        self.sink_q = (0..self.n * self.n).map(|i| q[(i / self.n, i % self.n)]).collect();
        Ok(self)
    }

    /// Regularization ε in Ω α*/(|α|² + ε).
    pub fn with_regularization(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    /// Site energy (cm⁻¹) subtracted when reporting the exciton energy.
    pub fn with_energy_reference(mut self, cm1: f64) -> Self {
        self.reference = cm1_to_rad_fs(cm1);
        self
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }
    pub fn n_modes(&self) -> usize {
        self.nq
    }
    /// ω₀ in rad/fs.
    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    pub fn energy_reference(&self) -> f64 {
        self.reference
    }
    pub fn regularization(&self) -> f64 {
        self.eps
    }
    #[inline]
    pub fn k(&self, n: usize, m: usize) -> f64 {
        self.k[n * self.n + m]
    }
    #[inline]
    pub fn omega(&self, q: usize) -> f64 {
        self.omega[q]
    }
    /// Mean site energy in rad/fs, the rotating frame used for stepping.
    pub fn frame_shift(&self) -> f64 {
        (0..self.n).map(|i| self.k[i * self.n + i]).sum::<f64>() / self.n as f64
    }
    pub fn max_omega(&self) -> f64 {
        self.omega.iter().cloned().fold(0.0, f64::max)
    }
    /// (1/√N) ω_q g_q e^(−iqn)
    #[inline]
    pub fn drive(&self, n: usize, q: usize) -> C64 {
        self.drive[n * self.nq + q]
    }
    /// γ in rad/fs (zero without a sink).
    pub fn sink_gamma(&self) -> f64 {
        self.sink_gamma
    }
    #[inline]
    pub fn sink_q(&self, n: usize, m: usize) -> f64 {
        self.sink_q[n * self.n + m]
    }
    pub fn has_sink(&self) -> bool {
        self.sink_gamma > 0.0 && self.sink_q.iter().any(|&x| x != 0.0)
    }
}
