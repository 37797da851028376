use super::SpectroscopyError;
use crate::dynamics::{D1State, Rk4, System};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeTableConfig {
    /// Integrator step, fs.
    pub dt: f64,
    /// Sampling interval of the table, fs (an integer multiple of `dt`).
    pub sample_step: f64,
    /// Latest time needed, fs.
    pub t_forward: f64,
    /// Earliest time needed, as a positive number of fs before zero.
    pub t_backward: f64,
    /// Propagate backward explicitly even when the backward half can be
    /// obtained from the forward one by time reversal.
    pub explicit_backward: bool,
}

/// α_{m₁m}(t) and λ_{m₁q}(t) for every initial site m on a uniform time grid
/// spanning [−t_backward, t_forward].
#[derive(Debug, Clone)]
pub struct AmplitudeTable {
    pub n_sites: usize,
    pub n_modes: usize,
    pub step: f64,
    pub n_back: usize,
    pub n_fwd: usize,
    alpha: Vec<C64>,
    lambda: Vec<C64>,
}

impl AmplitudeTable {
    fn slots(&self) -> usize {
        self.n_back + self.n_fwd + 1
    }

    #[inline]
    fn slot(&self, k: i64) -> usize {
        debug_assert!(k >= -(self.n_back as i64) && k <= self.n_fwd as i64);
        (k + self.n_back as i64) as usize
    }

    /// Whether sample index `k` (time k·step) is stored.
    pub fn covers(&self, k: i64) -> bool {
        k >= -(self.n_back as i64) && k <= self.n_fwd as i64
    }

    /// α_{m₁m} at time k·step.
    #[inline]
    pub fn alpha(&self, m: usize, k: i64, m1: usize) -> C64 {
        self.alpha[(m * self.slots() + self.slot(k)) * self.n_sites + m1]
    }

    /// All α_{·m} at time k·step.
    pub fn alpha_slice(&self, m: usize, k: i64) -> &[C64] {
        let o = (m * self.slots() + self.slot(k)) * self.n_sites;
        &self.alpha[o..o + self.n_sites]
    }

    /// λ_{m₁·} of the trajectory started at m, time k·step.
    #[inline]
    pub fn lambda_row(&self, m: usize, k: i64, m1: usize) -> &[C64] {
        let o = ((m * self.slots() + self.slot(k)) * self.n_sites + m1) * self.n_modes;
        &self.lambda[o..o + self.n_modes]
    }
}

/// One closed propagation per initial site, forward and backward in time.
pub fn build_amplitude_table(sys: &System, cfg: &AmplitudeTableConfig) -> Result<AmplitudeTable, SpectroscopyError> {
    let stride = (cfg.sample_step / cfg.dt).round();
    if !(cfg.dt > 0.0) || stride < 1.0 || (stride * cfg.dt - cfg.sample_step).abs() > 1e-9 * cfg.sample_step {
        return Err(SpectroscopyError::GridMismatch(format!(
            "sample step {} fs is not a multiple of dt {} fs",
            cfg.sample_step, cfg.dt
        )));
    }
    if sys.has_sink() {
        return Err(SpectroscopyError::GridMismatch("amplitude table needs a closed system".into()));
    }
    let stride = stride as usize;
    let n_fwd = (cfg.t_forward / cfg.sample_step).ceil().max(0.0) as usize;
    let n_back = (cfg.t_backward / cfg.sample_step).ceil().max(0.0) as usize;
    let n = sys.n_sites();
    let nq = sys.n_modes();
    let slots = n_back + n_fwd + 1;
    let mut table = AmplitudeTable {
        n_sites: n,
        n_modes: nq,
        step: cfg.sample_step,
        n_back,
        n_fwd,
        alpha: vec![C64::new(0.0, 0.0); n * slots * n],
        lambda: vec![C64::new(0.0, 0.0); n * slots * n * nq],
    };
    let mirror = if cfg.explicit_backward || n_back > n_fwd { None } else { mode_mirror(sys) };
    let mut rk = Rk4::new(sys);
    for m in 0..n {
        let back = if mirror.is_some() { 0 } else { n_back };
        for (dir, count) in [(1.0, n_fwd), (-1.0, back)] {
            let mut st = D1State::localized(n, nq, m);
            store(&mut table, m, 0, &st);
            for k in 1..=count {
                for _ in 0..stride {
                    rk.step(sys, &mut st, dir * cfg.dt)?;
                }
                store(&mut table, m, dir as i64 * k as i64, &st);
            }
        }
        if let Some(p) = &mirror {
            reverse_fill(&mut table, m, p);
        }
    }
    Ok(table)
}

/// Permutation q → q̄ with ω_q̄ = ω_q and drive(n, q̄) = conj drive(n, q), if
/// the bath has one. With a real K this makes the dynamics time-reversal
/// symmetric: α(−t) = conj α(t), λ_q(−t) = conj λ_q̄(t).
fn mode_mirror(sys: &System) -> Option<Vec<usize>> {
    let (n, nq) = (sys.n_sites(), sys.n_modes());
    let close = |a: C64, b: C64| (a - b).norm() <= 1e-12 * (a.norm() + b.norm()).max(1e-300);
    (0..nq)
        .map(|q| {
            (0..nq).find(|&p| {
                (sys.omega(p) - sys.omega(q)).abs() <= 1e-12 * sys.omega(q).abs()
                    && (0..n).all(|s| close(sys.drive(s, p), sys.drive(s, q).conj()))
            })
        })
        .collect()
}

fn reverse_fill(t: &mut AmplitudeTable, m: usize, mirror: &[usize]) {
    let (n, nq) = (t.n_sites, t.n_modes);
    for k in 1..=t.n_back as i64 {
        let src = m * t.slots() + t.slot(k);
        let dst = m * t.slots() + t.slot(-k);
        for s in 0..n {
            t.alpha[dst * n + s] = t.alpha[src * n + s].conj();
            for q in 0..nq {
                t.lambda[(dst * n + s) * nq + q] = t.lambda[(src * n + s) * nq + mirror[q]].conj();
            }
        }
    }
}

fn store(t: &mut AmplitudeTable, m: usize, k: i64, st: &D1State) {
    let (n, nq) = (t.n_sites, t.n_modes);
    let base = m * t.slots() + t.slot(k);
    t.alpha[base * n..(base + 1) * n].copy_from_slice(&st.alpha);
    t.lambda[base * n * nq..(base + 1) * n * nq].copy_from_slice(&st.lambda);
}
