use super::{AmplitudeTable, LineshapeTable, OrientationTensor, SpectroscopyError};
use crate::C64;
use rayon::prelude::*;

/// Response grid layout: τ_i = i·step, t_j = j·step, fixed T_w.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseConfig {
    pub n_tau: usize,
    pub n_t: usize,
    /// fs, a multiple of the table step.
    pub t_w: f64,
}

/// R₁..R₄ on the (τ, t) grid, stored τ-major: `r1[i * n_t + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseGrid {
    /// fs
    pub tau_grid: Vec<f64>,
    /// fs
    pub t_grid: Vec<f64>,
    /// fs
    pub t_w: f64,
    pub r1: Vec<C64>,
    pub r2: Vec<C64>,
    pub r3: Vec<C64>,
    pub r4: Vec<C64>,
}

impl ResponseGrid {
    pub fn n_tau(&self) -> usize {
        self.tau_grid.len()
    }
    pub fn n_t(&self) -> usize {
        self.t_grid.len()
    }
    pub fn step(&self) -> f64 {
        if self.t_grid.len() > 1 { self.t_grid[1] - self.t_grid[0] } else { 0.0 }
    }
}

/// Pre-split bra/ket factors for one pair of times.
struct CoreWorkspace {
    nn: usize,
    nq: usize,
    u: Vec<C64>,
    lr: Vec<f64>,
    li: Vec<f64>,
    v: Vec<C64>,
    mr: Vec<f64>,
    mi: Vec<f64>,
    er: Vec<f64>,
    ei: Vec<f64>,
}

impl CoreWorkspace {
    fn new(n: usize, nq: usize) -> Self {
        let nn = n * n;
        Self {
            nn,
            nq,
            u: vec![C64::new(0.0, 0.0); nn],
            lr: vec![0.0; nn * nq],
            li: vec![0.0; nn * nq],
            v: vec![C64::new(0.0, 0.0); nn],
            mr: vec![0.0; nq * nn],
            mi: vec![0.0; nq * nn],
            er: vec![0.0; nn],
            ei: vec![0.0; nn],
        }
    }
}

struct Evaluator<'a> {
    table: &'a AmplitudeTable,
    orient: &'a OrientationTensor,
    omega: &'a [f64],
}

impl Evaluator<'_> {
    /// Σ C̄ α*_{m₁m}(t_b) α_{m₂m₃}(t_k) ⟨λ^{(m)}_{m₁}(t_b)| e^{iω_q φ} |λ^{(m₃)}_{m₂}(t_k)⟩
    /// with t_b = kb·step, t_k = kk·step, φ = kp·step.
    fn core(&self, ws: &mut CoreWorkspace, kb: i64, kk: i64, kp: i64) -> C64 {
        let t = self.table;
        let n = t.n_sites;
        let (nn, nq) = (ws.nn, ws.nq);
        let phi = kp as f64 * t.step;
        let rot: Vec<C64> = self.omega.iter().map(|w| C64::from_polar(1.0, w * phi)).collect();

        for m in 0..n {
            for m1 in 0..n {
                let a = m * n + m1;
                let l = t.lambda_row(m, kb, m1);
                let norm: f64 = l.iter().map(|x| x.norm_sqr()).sum();
                ws.u[a] = t.alpha(m, kb, m1).conj() * (-0.5 * norm).exp();
                for q in 0..nq {
                    ws.lr[a * nq + q] = l[q].re;
                    ws.li[a * nq + q] = -l[q].im;
                }
            }
        }
        for m3 in 0..n {
            for m2 in 0..n {
                let b = m3 * n + m2;
                let l = t.lambda_row(m3, kk, m2);
                let norm: f64 = l.iter().map(|x| x.norm_sqr()).sum();
                ws.v[b] = t.alpha(m3, kk, m2) * (-0.5 * norm).exp();
                for q in 0..nq {
                    let z = l[q] * rot[q];
                    ws.mr[q * nn + b] = z.re;
                    ws.mi[q * nn + b] = z.im;
                }
            }
        }

        let mut total = C64::new(0.0, 0.0);
        for a in 0..nn {
            let ua = ws.u[a];
            if ua.re == 0.0 && ua.im == 0.0 {
                continue;
            }
            ws.er.iter_mut().for_each(|x| *x = 0.0);
            ws.ei.iter_mut().for_each(|x| *x = 0.0);
            for q in 0..nq {
                let (ar, ai) = (ws.lr[a * nq + q], ws.li[a * nq + q]);
                let (mr, mi) = (&ws.mr[q * nn..(q + 1) * nn], &ws.mi[q * nn..(q + 1) * nn]);
                for b in 0..nn {
                    ws.er[b] += ar * mr[b] - ai * mi[b];
                    ws.ei[b] += ar * mi[b] + ai * mr[b];
                }
            }
            let c = self.orient.row(a);
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..nn {
                let vb = ws.v[b];
                if c[b] == 0.0 || (vb.re == 0.0 && vb.im == 0.0) {
                    continue;
                }
                let (s, co) = ws.ei[b].sin_cos();
                let mag = c[b] * ws.er[b].exp();
                acc += vb * C64::new(mag * co, mag * s);
            }
            total += ua * acc;
        }
        total
    }
}

/// Third-order one-exciton response functions R₁..R₄ at fixed T_w.
///
/// The bra/ket time arguments and the phonon phase of each pathway are
///
/// | pathway | bra      | ket        | phase    |
/// |---------|----------|------------|----------|
/// | R₁      | T_w      | τ+T_w+t    | t        |
/// | R₂      | τ+T_w    | T_w+t      | t        |
/// | R₃      | τ        | t          | T_w+t    |
/// | R₄      | −t       | τ          | −T_w     |
pub fn response_functions(
    table: &AmplitudeTable,
    dipoles: &[[f64; 3]],
    omega_rad_fs: &[f64],
    lineshape: &LineshapeTable,
    cfg: &ResponseConfig,
) -> Result<ResponseGrid, SpectroscopyError> {
    let step = table.step;
    if dipoles.len() != table.n_sites || omega_rad_fs.len() != table.n_modes {
        return Err(SpectroscopyError::GridMismatch("dipoles or modes do not match the amplitude table".into()));
    }
    if (lineshape.step() - step).abs() > 1e-12 * step {
        return Err(SpectroscopyError::GridMismatch("lineshape and amplitude grids differ".into()));
    }
    let kw = (cfg.t_w / step).round();
    if !(cfg.t_w >= 0.0) || (kw * step - cfg.t_w).abs() > 1e-9 * step.max(1.0) {
        return Err(SpectroscopyError::GridMismatch(format!("T_w = {} fs is not on the {} fs grid", cfg.t_w, step)));
    }
    if cfg.n_tau == 0 || cfg.n_t == 0 {
        return Err(SpectroscopyError::GridMismatch("empty response grid".into()));
    }
    let kw = kw as i64;
    let (nt_max, ntau_max) = ((cfg.n_t - 1) as i64, (cfg.n_tau - 1) as i64);
    if !table.covers(ntau_max + kw + nt_max) || !table.covers(-nt_max) {
        return Err(SpectroscopyError::GridMismatch("amplitude table does not cover the response grid".into()));
    }
    if lineshape.len() <= (ntau_max + kw + nt_max) as usize {
        return Err(SpectroscopyError::GridMismatch("lineshape table too short".into()));
    }

    let orient = OrientationTensor::new(dipoles);
    let ev = Evaluator { table, orient: &orient, omega: omega_rad_fs };
    let rows: Vec<Vec<[C64; 4]>> = (0..cfg.n_tau as i64)
        .into_par_iter()
        .map(|i| {
            let mut ws = CoreWorkspace::new(table.n_sites, table.n_modes);
            (0..cfg.n_t as i64)
                .map(|j| {
                    let f = lineshape.factors(i as usize, kw as usize, j as usize);
                    let r1 = ev.core(&mut ws, kw, i + kw + j, j);
                    let r2 = ev.core(&mut ws, i + kw, kw + j, j);
                    let r3 = if kw == 0 { r2 } else { ev.core(&mut ws, i, j, kw + j) };
                    let r4 = ev.core(&mut ws, -j, i, -kw);
                    [r1 * f[0], r2 * f[1], r3 * f[2], r4 * f[3]]
                })
                .collect()
        })
        .collect();

    let total = cfg.n_tau * cfg.n_t;
    let mut out = ResponseGrid {
        tau_grid: (0..cfg.n_tau).map(|i| i as f64 * step).collect(),
        t_grid: (0..cfg.n_t).map(|j| j as f64 * step).collect(),
        t_w: cfg.t_w,
        r1: Vec::with_capacity(total),
        r2: Vec::with_capacity(total),
        r3: Vec::with_capacity(total),
        r4: Vec::with_capacity(total),
    };
    for row in rows {
        for [a, b, c, d] in row {
            out.r1.push(a);
            out.r2.push(b);
            out.r3.push(c);
            out.r4.push(d);
        }
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::dynamics::System;
    use crate::model::{build_phonon_bath, ExcitonMatrix};
    use crate::spectroscopy::{build_amplitude_table, AmplitudeTableConfig, BathLineshapeParams};
    use crate::units::cm1_to_rad_fs;
    use nalgebra::DMatrix;

    /// Bare two-level site at ε cm⁻¹ with ω₀ = 1000 cm⁻¹, lineshape off.
    pub(crate) fn two_level(eps: f64, n: usize, step: f64) -> (ResponseGrid, f64) {
        let ex = ExcitonMatrix { k: DMatrix::from_element(1, 1, eps) };
        let bath = build_phonon_bath(1, 1000.0, 0.0, 0.0).unwrap();
        let sys = System::new(&ex, &bath).unwrap();
        let span = 2.0 * (n - 1) as f64 * step;
        let cfg = AmplitudeTableConfig { dt: step / 10.0, sample_step: step, t_forward: span, t_backward: span, explicit_backward: false };
        let table = build_amplitude_table(&sys, &cfg).unwrap();
        let ls = LineshapeTable::new(&BathLineshapeParams { lambda0: 0.0, ..Default::default() }, step, 2 * n).unwrap();
        let omega: Vec<f64> = (0..1).map(|q| sys.omega(q)).collect();
        let grid = response_functions(&table, &[[1.0, 0.0, 0.0]], &omega, &ls, &ResponseConfig { n_tau: n, n_t: n, t_w: 0.0 })
            .unwrap();
        (grid, sys.omega0())
    }

    #[test]
    fn two_level_pathways() {
        let eps = -300.0;
        let (g, _) = two_level(eps, 6, 2.0);
        let e = cm1_to_rad_fs(eps);
        let n = g.n_t();
        for i in 0..g.n_tau() {
            for j in 0..n {
                let (tau, t) = (g.tau_grid[i], g.t_grid[j]);
                let k = i * n + j;
                let reph = C64::from_polar(0.2, e * tau - e * t);
                let nonr = C64::from_polar(0.2, -e * (tau + t));
                assert!((g.r2[k] - reph).norm() < 1e-9);
                assert!((g.r3[k] - reph).norm() < 1e-9);
                assert!((g.r1[k] - nonr).norm() < 1e-9);
                assert!((g.r4[k] - nonr).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_uncovered_grid() {
        let ex = ExcitonMatrix { k: DMatrix::from_element(1, 1, 0.0) };
        let bath = build_phonon_bath(1, 1000.0, 0.0, 0.0).unwrap();
        let sys = System::new(&ex, &bath).unwrap();
        let cfg = AmplitudeTableConfig { dt: 0.1, sample_step: 1.0, t_forward: 5.0, t_backward: 5.0, explicit_backward: false };
        let table = build_amplitude_table(&sys, &cfg).unwrap();
        let ls = LineshapeTable::new(&BathLineshapeParams::default(), 1.0, 40).unwrap();
        let d = [[1.0, 0.0, 0.0]];
        let w = [sys.omega(0)];
        let bad = ResponseConfig { n_tau: 4, n_t: 4, t_w: 0.0 };
        assert!(response_functions(&table, &d, &w, &ls, &bad).is_err());
        let off_grid = ResponseConfig { n_tau: 2, n_t: 2, t_w: 0.5 };
        assert!(response_functions(&table, &d, &w, &ls, &off_grid).is_err());
        let ok = ResponseConfig { n_tau: 3, n_t: 3, t_w: 0.0 };
        assert!(response_functions(&table, &d, &w, &ls, &ok).is_ok());
    }
}
