use super::eom::debye_waller_matrix;
use super::{eom_rhs, Derivative, D1State, System, Trajectory};
use crate::observables::energy_components;
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);

/// Δ = ‖i∂_t|D1⟩ − Ĥ|D1⟩‖ in units of ω₀.
///
/// Projected onto site n the residual is
/// c_n|λ_n⟩ + Σ_q d_nq b_q†|λ_n⟩ + Σ_(m≠n) e_nm|λ_m⟩ and its norm follows from
/// coherent-state algebra.
pub fn deviation_amplitude(state: &D1State, rhs: &Derivative, sys: &System) -> f64 {
    let s = debye_waller_matrix(state);
    deviation_from_parts(state, &rhs.dalpha, &rhs.dlambda, &s, sys)
}

pub(crate) fn deviation_from_parts(state: &D1State, da: &[C64], dl: &[C64], s: &[C64], sys: &System) -> f64 {
    let n = sys.n_sites();
    let nq = sys.n_modes();
    let half_gamma = 0.5 * sys.sink_gamma();
    let mut d = vec![C64::new(0.0, 0.0); nq];
    let mut e = vec![C64::new(0.0, 0.0); n];
    let mut total = 0.0;
    for i in 0..n {
        let a = state.alpha[i];
        let li = state.lambda_row(i);
        let dli = &dl[i * nq..(i + 1) * nq];
        let mut proj = 0.0;
        let mut field = C64::new(0.0, 0.0);
        for q in 0..nq {
            proj += (dli[q] * li[q].conj()).re;
            field += sys.drive(i, q).conj() * li[q];
            d[q] = I * a * dli[q] - a * li[q] * sys.omega(q) + a * sys.drive(i, q);
        }
        let c = I * da[i] - I * a * proj + a * field - a * sys.k(i, i) + I * a * (half_gamma * sys.sink_q(i, i));
        for j in 0..n {
            e[j] = if j == i {
                C64::new(0.0, 0.0)
            } else {
                -(C64::new(sys.k(i, j), -half_gamma * sys.sink_q(i, j))) * state.alpha[j]
            };
        }

        // ⟨own|own⟩
        let mut cd = c;
        let mut dd = 0.0;
        for q in 0..nq {
            cd += d[q] * li[q].conj();
            dd += d[q].norm_sqr();
        }
        let mut norm = cd.norm_sqr() + dd;
        // 2 Re ⟨own|m⟩
        for j in 0..n {
            if j == i || e[j] == C64::new(0.0, 0.0) {
                continue;
            }
            let lj = state.lambda_row(j);
            let mut left = c.conj();
            for q in 0..nq {
                left += d[q].conj() * lj[q];
            }
            norm += 2.0 * (s[i * n + j] * left * e[j]).re;
        }
        // Σ ⟨m|m'⟩
        for j in 0..n {
            if e[j] == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..n {
                norm += (s[j * n + k] * e[j].conj() * e[k]).re;
            }
        }
        total += norm;
    }
    total.max(0.0).sqrt() / sys.omega0()
}

/// σ_dev = max_t Δ(t) / mean_t E_ph(t), or `None` when the bath never holds
/// energy (uncoupled exciton).
pub fn relative_deviation(traj: &Trajectory, sys: &System) -> Option<f64> {
    if traj.snapshots.is_empty() {
        return None;
    }
    let max_dev = traj.snapshots.iter().map(|s| s.deviation_amplitude).fold(0.0, f64::max);
    let mean_eph = traj.snapshots.iter().map(|s| energy_components(&s.state, sys).bath).sum::<f64>()
        / traj.snapshots.len() as f64;
    if mean_eph <= f64::EPSILON {
        None
    } else {
        Some(max_dev / mean_eph)
    }
}

/// Δ at `state`, evaluating the right-hand side first.
pub fn deviation_at(state: &D1State, sys: &System) -> Result<f64, super::DynamicsError> {
    let rhs = eom_rhs(state, sys)?;
    Ok(deviation_amplitude(state, &rhs, sys))
}
