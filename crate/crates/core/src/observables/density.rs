use crate::dynamics::{debye_waller_matrix, D1State};
use crate::C64;
use nalgebra::DMatrix;

/// Exciton reduced density matrix ρ_nm = α_n* α_m S_nm.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensityMatrix {
    pub rho: DMatrix<C64>,
    /// fs
    pub time: f64,
}

impl ReducedDensityMatrix {
    pub fn n(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.rho[(i, i)].re).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.rho[(i, i)].re).collect()
    }
}

pub fn reduced_density(state: &D1State) -> ReducedDensityMatrix {
    let n = state.n_sites();
    let s = debye_waller_matrix(state);
    let rho = DMatrix::from_fn(n, n, |i, j| state.alpha[i].conj() * state.alpha[j] * s[i * n + j]);
    ReducedDensityMatrix { rho, time: state.time }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projector_when_undisplaced() {
        let mut st = D1State::localized(3, 2, 0);
        st.alpha = vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0)];
        let r = reduced_density(&st);
        assert!((r.trace() - 1.0).abs() < 1e-15);
        assert!((r.rho[(0, 1)] - C64::new(0.0, 0.48)).norm() < 1e-15);
        let local = reduced_density(&D1State::localized(4, 4, 2));
        assert_eq!(local.rho[(2, 2)], C64::new(1.0, 0.0));
        assert_eq!(local.rho.iter().filter(|x| x.norm() > 0.0).count(), 1);
    }
}
