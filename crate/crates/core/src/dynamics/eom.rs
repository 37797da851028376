use super::{D1State, DynamicsError, System};
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);

/// Time derivatives of the variational parameters (per fs).
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub dalpha: Vec<C64>,
    pub dlambda: Vec<C64>,
}

fn overlap_exponent(ln: &[C64], lm: &[C64], nn: f64, nm: f64) -> C64 {
    let mut x = C64::new(-0.5 * (nn + nm), 0.0);
    for (a, b) in ln.iter().zip(lm) {
        x += a.conj() * b;
    }
    x
}

/// Debye–Waller factor S_nm = ⟨λ_n|λ_m⟩.
pub fn debye_waller(state: &D1State, n: usize, m: usize) -> C64 {
    if n == m {
        return C64::new(1.0, 0.0);
    }
    let (ln, lm) = (state.lambda_row(n), state.lambda_row(m));
    let nn: f64 = ln.iter().map(|x| x.norm_sqr()).sum();
    let nm: f64 = lm.iter().map(|x| x.norm_sqr()).sum();
    overlap_exponent(ln, lm, nn, nm).exp()
}

/// Full S matrix, row-major N × N.
pub fn debye_waller_matrix(state: &D1State) -> Vec<C64> {
    let mut s = vec![C64::new(0.0, 0.0); state.n_sites() * state.n_sites()];
    fill_overlaps(&state.lambda, state.n_sites(), state.n_modes, &mut vec![0.0; state.n_sites()], &mut s);
    s
}

pub(crate) fn fill_overlaps(lambda: &[C64], n: usize, nq: usize, norms: &mut [f64], s: &mut [C64]) {
    for i in 0..n {
        norms[i] = lambda[i * nq..(i + 1) * nq].iter().map(|x| x.norm_sqr()).sum();
    }
    for i in 0..n {
        s[i * n + i] = C64::new(1.0, 0.0);
        let li = &lambda[i * nq..(i + 1) * nq];
        for j in (i + 1)..n {
            let v = overlap_exponent(li, &lambda[j * nq..(j + 1) * nq], norms[i], norms[j]).exp();
            s[i * n + j] = v;
            s[j * n + i] = v.conj();
        }
    }
}

pub(crate) fn check_finite(alpha: &[C64], lambda: &[C64], nq: usize, time: f64) -> Result<(), DynamicsError> {
    if let Some(site) = alpha.iter().position(|a| !(a.re.is_finite() && a.im.is_finite())) {
        return Err(DynamicsError::NonFinite { time, site, mode: None });
    }
    if let Some(i) = lambda.iter().position(|a| !(a.re.is_finite() && a.im.is_finite())) {
        return Err(DynamicsError::NonFinite { time, site: i / nq, mode: Some(i % nq) });
    }
    Ok(())
}

/// Reusable buffers for repeated right-hand-side evaluations.
///
/// Displacements are copied into split real/imaginary arrays so the mode
/// loops vectorize.
#[derive(Debug, Clone)]
pub(crate) struct EomWorkspace {
    norms: Vec<f64>,
    pub(crate) s: Vec<C64>,
    a: Vec<C64>,
    t: Vec<C64>,
    lr: Vec<f64>,
    li: Vec<f64>,
    or: Vec<f64>,
    oi: Vec<f64>,
}

impl EomWorkspace {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            norms: vec![0.0; n],
            s: vec![C64::new(0.0, 0.0); n * n],
            a: vec![C64::new(0.0, 0.0); n * n],
            t: vec![C64::new(0.0, 0.0); n],
            lr: Vec::new(),
            li: Vec::new(),
            or: Vec::new(),
            oi: Vec::new(),
        }
    }

    fn overlaps_split(&mut self, n: usize, nq: usize) {
        let (lr, li) = (&self.lr, &self.li);
        for i in 0..n {
            let (r, m) = (&lr[i * nq..(i + 1) * nq], &li[i * nq..(i + 1) * nq]);
            self.norms[i] = r.iter().zip(m).map(|(a, b)| a * a + b * b).sum();
        }
        for i in 0..n {
            self.s[i * n + i] = C64::new(1.0, 0.0);
            let (ar, ai) = (&lr[i * nq..(i + 1) * nq], &li[i * nq..(i + 1) * nq]);
            for j in (i + 1)..n {
                let (br, bi) = (&lr[j * nq..(j + 1) * nq], &li[j * nq..(j + 1) * nq]);
                let mut re = 0.0;
                let mut im = 0.0;
                for q in 0..nq {
                    re += ar[q] * br[q] + ai[q] * bi[q];
                    im += ar[q] * bi[q] - ai[q] * br[q];
                }
                let v = C64::new(re - 0.5 * (self.norms[i] + self.norms[j]), im).exp();
                self.s[i * n + j] = v;
                self.s[j * n + i] = v.conj();
            }
        }
    }

    /// Evaluate the D1 equations of motion into `da`, `dl`, in the frame
    /// rotating at `shift` rad/fs (K replaced by K − shift·1).
    pub(crate) fn eval(
        &mut self,
        sys: &System,
        shift: f64,
        alpha: &[C64],
        lambda: &[C64],
        da: &mut [C64],
        dl: &mut [C64],
    ) {
        let n = sys.n_sites();
        let nq = sys.n_modes();
        let eps = sys.regularization();
        self.lr.clear();
        self.li.clear();
        self.lr.extend(lambda.iter().map(|x| x.re));
        self.li.extend(lambda.iter().map(|x| x.im));
        self.or.resize(nq, 0.0);
        self.oi.resize(nq, 0.0);
        let undisplaced = lambda.iter().all(|x| x.re == 0.0 && x.im == 0.0);
        if undisplaced {
            self.s.iter_mut().for_each(|x| *x = C64::new(1.0, 0.0));
        } else {
            self.overlaps_split(n, nq);
        }

        // A_nm = K_nm α_m S_nm,  T_n = −Σ_m A_nm
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..n {
                let k = if i == j { sys.k(i, j) - shift } else { sys.k(i, j) };
                let v = alpha[j] * self.s[i * n + j] * k;
                self.a[i * n + j] = v;
                acc += v;
            }
            self.t[i] = -acc;
        }

        for i in 0..n {
            let (lir, lii) = (&self.lr[i * nq..(i + 1) * nq], &self.li[i * nq..(i + 1) * nq]);
            let t = self.t[i];
            // Ω_iq = −Σ_m A_im λ_mq − λ_iq T_i
            for q in 0..nq {
                self.or[q] = -(lir[q] * t.re - lii[q] * t.im);
                self.oi[q] = -(lir[q] * t.im + lii[q] * t.re);
            }
            for j in 0..n {
                let a = self.a[i * n + j];
                if undisplaced || (a.re == 0.0 && a.im == 0.0) {
                    continue;
                }
                let (ljr, lji) = (&self.lr[j * nq..(j + 1) * nq], &self.li[j * nq..(j + 1) * nq]);
                for q in 0..nq {
                    self.or[q] -= a.re * ljr[q] - a.im * lji[q];
                    self.oi[q] -= a.re * lji[q] + a.im * ljr[q];
                }
            }
            let inv = alpha[i].conj() / (alpha[i].norm_sqr() + eps);
            let out = &mut dl[i * nq..(i + 1) * nq];
            let mut r = 0.0;
            for q in 0..nq {
                let x = C64::new(self.or[q], self.oi[q]) * inv;
                let d = sys.drive(i, q);
                let l = C64::new(lir[q], lii[q]);
                r += ((d - x) * l.conj()).re;
                out[q] = I * (x + d - l * sys.omega(q));
            }
            let mut v = I * (t + alpha[i] * r);
            if sys.sink_gamma() > 0.0 {
                let half = 0.5 * sys.sink_gamma();
                for j in 0..n {
                    let qij = sys.sink_q(i, j);
                    if qij != 0.0 {
                        v -= self.s[i * n + j] * alpha[j] * (half * qij);
                    }
                }
            }
            da[i] = v;
        }
    }
}

/// Right-hand side of the D1 equations of motion.
///
/// α̇_n = i[T_n + α_n R_n] − (γ/2) Σ_m Q_nm S_nm α_m
/// λ̇_nq = i[Ω_nq α_n*/(|α_n|² + ε) + (1/√N) ω_q g_q e^(−iqn) − ω_q λ_nq]
pub fn eom_rhs(state: &D1State, sys: &System) -> Result<Derivative, DynamicsError> {
    let n = sys.n_sites();
    let nq = sys.n_modes();
    if state.alpha.len() != n || state.lambda.len() != n * nq || state.n_modes != nq {
        return Err(DynamicsError::Dimension(format!(
            "state has {} sites × {} modes, system {n} × {nq}",
            state.alpha.len(),
            state.n_modes
        )));
    }
    check_finite(&state.alpha, &state.lambda, nq, state.time)?;
    let mut ws = EomWorkspace::new(n);
    let mut d = Derivative { dalpha: vec![C64::new(0.0, 0.0); n], dlambda: vec![C64::new(0.0, 0.0); n * nq] };
    ws.eval(sys, 0.0, &state.alpha, &state.lambda, &mut d.dalpha, &mut d.dlambda);
    Ok(d)
}
