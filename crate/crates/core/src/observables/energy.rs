use crate::dynamics::{debye_waller_matrix, D1State, System};

/// Energy expectation values in units of ω₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyComponents {
    /// Exciton energy with the reference site energy removed.
    pub exciton: f64,
    pub bath: f64,
    pub interaction: f64,
    pub total: f64,
}

pub fn energy_components(state: &D1State, sys: &System) -> EnergyComponents {
    let n = sys.n_sites();
    let nq = sys.n_modes();
    let s = debye_waller_matrix(state);
    let mut ex = 0.0;
    for i in 0..n {
        for j in 0..n {
            ex += (state.alpha[i].conj() * state.alpha[j] * s[i * n + j]).re * sys.k(i, j);
        }
    }
    ex -= sys.energy_reference() * state.norm_sqr();
    let mut bath = 0.0;
    let mut int = 0.0;
    for i in 0..n {
        let p = state.alpha[i].norm_sqr();
        let l = state.lambda_row(i);
        let mut b = 0.0;
        let mut x = 0.0;
        for q in 0..nq {
            b += sys.omega(q) * l[q].norm_sqr();
            x += (sys.drive(i, q) * l[q].conj()).re;
        }
        bath += p * b;
        int -= 2.0 * p * x;
    }
    let w0 = sys.omega0();
    let (exciton, bath, interaction) = (ex / w0, bath / w0, int / w0);
    EnergyComponents { exciton, bath, interaction, total: exciton + bath + interaction }
}
