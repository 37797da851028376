use super::{
    coherence_size, energy_components, inverse_population_ratio, momentum_populations, msd_series, phonon_displacement,
    reduced_density, superradiance_factor, DistanceMetric, ObservableError,
};
use crate::dynamics::{System, Trajectory};
use crate::model::RingGeometry;

/// Names of the scalar series, in output order.
pub const SERIES_NAMES: [&str; 12] = [
    "lc", "ipr_rho", "ipr_rho_fourth", "ls", "msd_nm2", "norm", "p_sink", "e_ex", "e_bath", "e_int", "e_total", "delta_dev",
];

/// Observables on a common time grid.
///
/// Grid observables are stored time-major: `populations[t][n]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObservableSeries {
    /// fs
    pub times: Vec<f64>,
    /// One vector per entry of [`SERIES_NAMES`], same order.
    pub scalars: Vec<Vec<f64>>,
    pub populations: Vec<Vec<f64>>,
    pub n_k: Vec<Vec<f64>>,
    pub xi_n: Vec<Vec<f64>>,
}

impl ObservableSeries {
    pub fn from_trajectory(
        traj: &Trajectory,
        sys: &System,
        geometry: &RingGeometry,
        q_grid: &[f64],
        initial_site: usize,
        metric: DistanceMetric,
    ) -> Result<Self, ObservableError> {
        let t = traj.snapshots.len();
        let mut out = Self {
            times: traj.times(),
            scalars: vec![Vec::with_capacity(t); SERIES_NAMES.len()],
            populations: Vec::with_capacity(t),
            n_k: Vec::with_capacity(t),
            xi_n: Vec::with_capacity(t),
        };
        for snap in &traj.snapshots {
            let st = &snap.state;
            let rho = reduced_density(st);
            let ipr = inverse_population_ratio(&rho)?;
            let e = energy_components(st, sys);
            let norm = st.norm_sqr();
            let row = [
                coherence_size(&rho)?,
                ipr.squared,
                ipr.fourth_power,
                superradiance_factor(&rho, &geometry.dipoles),
                0.0,
                norm,
                1.0 - norm,
                e.exciton,
                e.bath,
                e.interaction,
                e.total,
                snap.deviation_amplitude,
            ];
            for (v, x) in out.scalars.iter_mut().zip(row) {
                v.push(x);
            }
            out.populations.push(rho.populations());
            out.n_k.push(momentum_populations(&rho, q_grid));
            out.xi_n.push(phonon_displacement(st, q_grid));
        }
        out.scalars[4] = msd_series(&out.populations, geometry, initial_site, metric);
        Ok(out)
    }

    pub fn series(&self, name: &str) -> Option<&[f64]> {
        SERIES_NAMES.iter().position(|&n| n == name).map(|i| self.scalars[i].as_slice())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Element-wise sum, used for ordered ensemble reduction.
    pub fn accumulate(&mut self, other: &Self) -> Result<(), ObservableError> {
        if self.is_empty() && self.scalars.is_empty() {
            *self = other.clone();
            return Ok(());
        }
        if self.times != other.times {
            return Err(ObservableError::Length("time grids differ".into()));
        }
        fn add(a: &mut [Vec<f64>], b: &[Vec<f64>]) {
            for (x, y) in a.iter_mut().zip(b) {
                for (u, v) in x.iter_mut().zip(y) {
                    *u += v;
                }
            }
        }
        add(&mut self.scalars, &other.scalars);
        add(&mut self.populations, &other.populations);
        add(&mut self.n_k, &other.n_k);
        add(&mut self.xi_n, &other.xi_n);
        Ok(())
    }

    pub fn scale(&mut self, f: f64) {
        for grid in [&mut self.scalars, &mut self.populations, &mut self.n_k, &mut self.xi_n] {
            for row in grid.iter_mut() {
                row.iter_mut().for_each(|x| *x *= f);
            }
        }
    }
}
