use super::{ObservableError, ReducedDensityMatrix};
use crate::dynamics::D1State;
use crate::C64;

/// L_c = (Σ|ρ_nm|)² / (N Σ|ρ_nm|²)
pub fn coherence_size(r: &ReducedDensityMatrix) -> Result<f64, ObservableError> {
    let (mut s1, mut s2) = (0.0, 0.0);
    for x in r.rho.iter() {
        let a = x.norm();
        s1 += a;
        s2 += a * a;
    }
    if s2 == 0.0 {
        return Err(ObservableError::ZeroDensity);
    }
    Ok(s1 * s1 / (r.n() as f64 * s2))
}

/// Inverse population ratio on trace-normalized populations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationRatio {
    /// 1/Σ p̃⁴ (fourth-power form).
    pub fourth_power: f64,
    /// 1/Σ p̃², the default delocalization count.
    pub squared: f64,
}

pub fn inverse_population_ratio(r: &ReducedDensityMatrix) -> Result<PopulationRatio, ObservableError> {
    let tr = r.trace();
    if !(tr > 0.0) {
        return Err(ObservableError::ZeroDensity);
    }
    let (mut s2, mut s4) = (0.0, 0.0);
    for p in r.populations() {
        let x = p / tr;
        s2 += x * x;
        s4 += x.powi(4);
    }
    Ok(PopulationRatio { fourth_power: 1.0 / s4, squared: 1.0 / s2 })
}

/// L_s = Re Σ (d̂_n·d̂_m) ρ_nm
pub fn superradiance_factor(r: &ReducedDensityMatrix, dipoles: &[[f64; 3]]) -> f64 {
    let n = r.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = dipoles[i][0] * dipoles[j][0] + dipoles[i][1] * dipoles[j][1] + dipoles[i][2] * dipoles[j][2];
            acc += d * r.rho[(i, j)].re;
        }
    }
    acc
}

/// n_k = (1/N) Σ e^(ik(n−m)) ρ_nm on the given k grid.
pub fn momentum_populations(r: &ReducedDensityMatrix, k_grid: &[f64]) -> Vec<f64> {
    let n = r.n();
    k_grid
        .iter()
        .map(|&k| {
            // Σ_nm e^{ikn} ρ_nm e^{-ikm} = u† ρ u with u_m = e^{-ikm}
            let u: Vec<C64> = (0..n).map(|m| C64::from_polar(1.0, -k * m as f64)).collect();
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                let mut row = C64::new(0.0, 0.0);
                for j in 0..n {
                    row += r.rho[(i, j)] * u[j];
                }
                acc += u[i].conj() * row;
            }
            acc.re / n as f64
        })
        .collect()
}

/// ξ_n = (1/√N) Σ_q Σ_n' |α_n'|² Re(e^(iqn) λ_n'q)
pub fn phonon_displacement(state: &D1State, q_grid: &[f64]) -> Vec<f64> {
    let n = state.n_sites();
    let nq = state.n_modes;
    // population-weighted displacement per mode
    let mut lbar = vec![C64::new(0.0, 0.0); nq];
    for j in 0..n {
        let p = state.alpha[j].norm_sqr();
        for (acc, l) in lbar.iter_mut().zip(state.lambda_row(j)) {
            *acc += l * p;
        }
    }
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|site| {
            scale * lbar.iter().zip(q_grid).map(|(l, &q)| (C64::from_polar(1.0, q * site as f64) * l).re).sum::<f64>()
        })
        .collect()
}

/// P_sink(t) = 1 − Σ|α_n(t)|² from a norm series.
pub fn sink_probability(norms: &[f64]) -> Vec<f64> {
    norms.iter().map(|&x| 1.0 - x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn dm(rho: DMatrix<C64>) -> ReducedDensityMatrix {
        ReducedDensityMatrix { rho, time: 0.0 }
    }

    #[test]
    fn coherence_limits() {
        let n = 16;
        let mut local = DMatrix::zeros(n, n);
        local[(3, 3)] = C64::new(1.0, 0.0);
        assert!((coherence_size(&dm(local)).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        let mixed = DMatrix::from_diagonal_element(n, n, C64::new(1.0 / 16.0, 0.0));
        assert!((coherence_size(&dm(mixed)).unwrap() - 1.0).abs() < 1e-14);
        let full = DMatrix::from_element(n, n, C64::new(1.0 / 16.0, 0.0));
        assert!((coherence_size(&dm(full)).unwrap() - 16.0).abs() < 1e-12);
        assert_eq!(coherence_size(&dm(DMatrix::zeros(n, n))), Err(ObservableError::ZeroDensity));
    }

    #[test]
    fn population_ratio_variants() {
        let uniform = DMatrix::from_diagonal_element(16, 16, C64::new(1.0 / 16.0, 0.0));
        let p = inverse_population_ratio(&dm(uniform)).unwrap();
        assert!((p.squared - 16.0).abs() < 1e-12);
        assert!((p.fourth_power - 4096.0).abs() < 1e-9);
        let mut half = DMatrix::zeros(4, 4);
        half[(0, 0)] = C64::new(0.25, 0.0);
        half[(2, 2)] = C64::new(0.25, 0.0);
        assert!((inverse_population_ratio(&dm(half)).unwrap().squared - 2.0).abs() < 1e-14);
    }

    #[test]
    fn localized_site_is_flat_in_k() {
        let mut local = DMatrix::zeros(8, 8);
        local[(5, 5)] = C64::new(1.0, 0.0);
        let k = crate::model::momentum_grid(8);
        for nk in momentum_populations(&dm(local), &k) {
            assert!((nk - 0.125).abs() < 1e-15);
        }
    }

    #[test]
    fn single_mode_displacement() {
        let mut st = D1State::localized(1, 1, 0);
        st.lambda[0] = C64::new(0.7, 0.0);
        let xi = phonon_displacement(&st, &crate::model::momentum_grid(1));
        assert!((xi[0] - 0.7).abs() < 1e-15);
    }
}
