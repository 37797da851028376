//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use polaring::dynamics::{Derivative, D1State, System};
use polaring::model::{build_phonon_bath, ExcitonMatrix};
use polaring::units::cm1_to_rad_fs;
use polaring::C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Three-site test ring in cm⁻¹.
pub fn trimer_matrix() -> ExcitonMatrix {
    let k = DMatrix::from_row_slice(3, 3, &[120.0, 300.0, -60.0, 300.0, -80.0, 250.0, -60.0, 250.0, 0.0]);
    ExcitonMatrix { k }
}

pub fn trimer_system(huang_rhys: f64) -> System {
    let bath = build_phonon_bath(3, 1670.0, 0.5, huang_rhys).unwrap();
    System::new(&trimer_matrix(), &bath).unwrap()
}

/// Exciton plus truncated boson Fock space, `levels` states per mode.
pub struct Fock {
    pub n_sites: usize,
    pub n_modes: usize,
    pub levels: usize,
    dim: usize,
    occ: Vec<Vec<usize>>,
    up: Vec<Vec<Option<usize>>>,
}

impl Fock {
    pub fn new(n_sites: usize, n_modes: usize, levels: usize) -> Self {
        let dim = levels.pow(n_modes as u32);
        let mut occ = Vec::with_capacity(dim);
        let mut up = Vec::with_capacity(dim);
        for idx in 0..dim {
            let mut o = Vec::with_capacity(n_modes);
            let mut u = Vec::with_capacity(n_modes);
            let mut rest = idx;
            for q in 0..n_modes {
                let k = rest % levels;
                rest /= levels;
                o.push(k);
                u.push(if k + 1 < levels { Some(idx + levels.pow(q as u32)) } else { None });
            }
            occ.push(o);
            up.push(u);
        }
        Self { n_sites, n_modes, levels, dim, occ, up }
    }

    pub fn len(&self) -> usize {
        self.n_sites * self.dim
    }

    pub fn localized(&self, site: usize) -> Vec<C64> {
        let mut psi = vec![C64::new(0.0, 0.0); self.len()];
        psi[site * self.dim] = C64::new(1.0, 0.0);
        psi
    }

    /// H ψ with H = Σ K|n⟩⟨m| + Σ ω b†b − Σ_n |n⟩⟨n| Σ_q (f_nq b†_q + f*_nq b_q).
    pub fn apply_h(&self, sys: &System, psi: &[C64]) -> Vec<C64> {
        let d = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); psi.len()];
        for n in 0..self.n_sites {
            for m in 0..self.n_sites {
                let k = sys.k(n, m);
                if k == 0.0 {
                    continue;
                }
                for i in 0..d {
                    out[n * d + i] += psi[m * d + i] * k;
                }
            }
            for i in 0..d {
                let x = psi[n * d + i];
                let mut e = 0.0;
                for q in 0..self.n_modes {
                    e += sys.omega(q) * self.occ[i][q] as f64;
                }
                out[n * d + i] += x * e;
                for q in 0..self.n_modes {
                    if let Some(j) = self.up[i][q] {
                        let s = ((self.occ[i][q] + 1) as f64).sqrt();
                        let f = sys.drive(n, q);
                        out[n * d + j] -= f * s * x;
                        out[n * d + i] -= f.conj() * s * psi[n * d + j];
                    }
                }
            }
        }
        out
    }

    /// One step of exp(−iH dt) by Taylor series.
    pub fn step(&self, sys: &System, psi: &mut Vec<C64>, dt: f64) {
        let mut term = psi.clone();
        let mut acc = psi.clone();
        for k in 1..60 {
            let h = self.apply_h(sys, &term);
            let c = C64::new(0.0, -dt / k as f64);
            let mut norm = 0.0;
            for (t, x) in term.iter_mut().zip(&h) {
                *t = c * x;
                norm += t.norm_sqr();
            }
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += t;
            }
            if norm.sqrt() < 1e-17 {
                break;
            }
        }
        *psi = acc;
    }

    pub fn populations(&self, psi: &[C64]) -> Vec<f64> {
        (0..self.n_sites).map(|n| psi[n * self.dim..(n + 1) * self.dim].iter().map(|x| x.norm_sqr()).sum()).collect()
    }

    fn coherent(&self, l: C64) -> Vec<C64> {
        let pre = (-0.5 * l.norm_sqr()).exp();
        let mut out = Vec::with_capacity(self.levels);
        let mut c = C64::new(pre, 0.0);
        for k in 0..self.levels {
            out.push(c);
            c = c * l / ((k + 1) as f64).sqrt();
        }
        out
    }

    fn coherent_dot(&self, l: C64, dl: C64) -> Vec<C64> {
        let c = self.coherent(l);
        let shift = -(l.conj() * dl).re;
        let pre = (-0.5 * l.norm_sqr()).exp();
        let mut out = Vec::with_capacity(self.levels);
        let mut lpow = C64::new(1.0, 0.0);
        let mut fact = 1.0_f64;
        for k in 0..self.levels {
            let grow = if k == 0 { C64::new(0.0, 0.0) } else { pre * k as f64 * lpow * dl / fact.sqrt() };
            out.push(c[k] * shift + grow);
            if k > 0 {
                lpow *= l;
            }
            fact *= (k + 1) as f64;
        }
        out
    }

    /// The D1 state projected onto the truncated space.
    pub fn from_d1(&self, s: &D1State) -> Vec<C64> {
        let d = self.dim;
        let mut psi = vec![C64::new(0.0, 0.0); self.len()];
        for n in 0..self.n_sites {
            let c: Vec<Vec<C64>> = (0..self.n_modes).map(|q| self.coherent(s.lambda(n, q))).collect();
            for i in 0..d {
                let mut x = s.alpha[n];
                for q in 0..self.n_modes {
                    x *= c[q][self.occ[i][q]];
                }
                psi[n * d + i] = x;
            }
        }
        psi
    }

    /// d/dt of the D1 state for the given parameter velocities.
    pub fn d1_velocity(&self, s: &D1State, v: &Derivative) -> Vec<C64> {
        let d = self.dim;
        let nq = self.n_modes;
        let mut out = vec![C64::new(0.0, 0.0); self.len()];
        for n in 0..self.n_sites {
            let c: Vec<Vec<C64>> = (0..nq).map(|q| self.coherent(s.lambda(n, q))).collect();
            let dc: Vec<Vec<C64>> = (0..nq).map(|q| self.coherent_dot(s.lambda(n, q), v.dlambda[n * nq + q])).collect();
            for i in 0..d {
                let o = &self.occ[i];
                let prod = |skip: usize| {
                    let mut x = C64::new(1.0, 0.0);
                    for q in 0..nq {
                        x *= if q == skip { dc[q][o[q]] } else { c[q][o[q]] };
                    }
                    x
                };
                let mut x = v.dalpha[n] * prod(usize::MAX);
                for q in 0..nq {
                    x += s.alpha[n] * prod(q);
                }
                out[n * d + i] = x;
            }
        }
        out
    }

    /// ‖i d/dt|D1⟩ − H|D1⟩‖ / ω₀ inside the truncated space.
    pub fn deviation(&self, sys: &System, s: &D1State, v: &Derivative) -> f64 {
        let psi = self.from_d1(s);
        let h = self.apply_h(sys, &psi);
        let dpsi = self.d1_velocity(s, v);
        let r: f64 = dpsi.iter().zip(&h).map(|(d, h)| (C64::i() * d - h).norm_sqr()).sum();
        r.sqrt() / sys.omega0()
    }
}

/// exp(−iKt) for a real symmetric K in rad/fs.
pub fn propagator(k: &DMatrix<f64>, t: f64) -> DMatrix<C64> {
    let eig = SymmetricEigen::new(k.clone());
    let n = k.nrows();
    let mut u = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut x = C64::new(0.0, 0.0);
            for j in 0..n {
                x += C64::from_polar(eig.eigenvectors[(a, j)] * eig.eigenvectors[(b, j)], -eig.eigenvalues[j] * t);
            }
            u[(a, b)] = x;
        }
    }
    u
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(k: &DMatrix<f64>) -> Vec<f64> {
    let n = k.nrows();
    let mut a = k.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| a[(i, j)].powi(2)).sum();
        if off.sqrt() < 1e-14 * a.norm() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)] == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    let (arp, arq) = (a[(r, p)], a[(r, q)]);
                    a[(r, p)] = c * arp - s * arq;
                    a[(r, q)] = s * arp + c * arq;
                }
                for r in 0..n {
                    let (apr, aqr) = (a[(p, r)], a[(q, r)]);
                    a[(p, r)] = c * apr - s * aqr;
                    a[(q, r)] = s * apr + c * aqr;
                }
            }
        }
    }
    let mut e: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Bare-exciton R1..R4 at one (τ, T_w, t) from eigenstates of K (rad/fs).
pub fn eigen_response(k: &DMatrix<f64>, dipoles: &[[f64; 3]], tau: f64, tw: f64, t: f64) -> [C64; 4] {
    let eig = SymmetricEigen::new(k.clone());
    let n = k.nrows();
    let mu: Vec<[f64; 3]> = (0..n)
        .map(|a| {
            let mut v = [0.0; 3];
            for m in 0..n {
                for c in 0..3 {
                    v[c] += eig.eigenvectors[(m, a)] * dipoles[m][c];
                }
            }
            v
        })
        .collect();
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let e = &eig.eigenvalues;
    let mut r = [C64::new(0.0, 0.0); 4];
    for a in 0..n {
        for b in 0..n {
            let w = (dot(&mu[a], &mu[a]) * dot(&mu[b], &mu[b]) + 2.0 * dot(&mu[a], &mu[b]).powi(2)) / 15.0;
            r[0] += C64::from_polar(w, e[a] * tw - e[b] * (tau + tw + t));
            r[1] += C64::from_polar(w, e[a] * (tau + tw) - e[b] * (tw + t));
            r[2] += C64::from_polar(w, e[a] * tau - e[b] * t);
            r[3] += C64::from_polar(w, -e[a] * t - e[b] * tau);
        }
    }
    r
}

/// g(t) for a Drude–Lorentz bath by direct quadrature of
/// (1/π)∫ J(ω)/ω² [coth(βω/2)(1 − cos ωt) + i(sin ωt − ωt)] dω.
pub fn g_quadrature(t: f64, lambda_cm1: f64, gamma_cm1: f64, temperature_k: f64) -> C64 {
    let lam = cm1_to_rad_fs(lambda_cm1);
    let gam = cm1_to_rad_fs(gamma_cm1);
    // k_B/ħ in rad/(fs·K)
    let beta = 1.0 / (temperature_k * 1.380649e-23 / 1.054571817e-34 * 1e-15);
    let spec = |w: f64| 2.0 * lam * gam * w / (w * w + gam * gam);
    let f = |w: f64| {
        let j = spec(w) / (w * w);
        let re = 2.0 * (0.5 * w * t).sin().powi(2) / (0.5 * beta * w).tanh();
        C64::new(j * re, j * ((w * t).sin() - w * t))
    };
    let (x, wq) = gauss_legendre_10();
    let cutoff = (5000.0 * gam).max(400.0 / t.max(1e-9));
    let h = 0.01_f64.min(0.5 / t.max(1e-9)).min(gam / 4.0);
    let panels = (cutoff / h).ceil() as usize;
    let h = cutoff / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        let a = p as f64 * h;
        for (xi, wi) in x.iter().zip(&wq) {
            acc += f(a + 0.5 * h * (xi + 1.0)) * (0.5 * h * wi);
        }
    }
    let tail = C64::new(lam * gam / (cutoff * cutoff), -2.0 * lam * gam * t / cutoff);
    (acc + tail) / PI
}

fn gauss_legendre_10() -> ([f64; 10], [f64; 10]) {
    let a = [0.1488743389816312, 0.4333953941292472, 0.6794095682990244, 0.8650633666889845, 0.9739065285171717];
    let w = [0.2955242247147529, 0.2692667193099963, 0.2190863625159820, 0.1494513491505806, 0.0666713443086881];
    let mut x = [0.0; 10];
    let mut wt = [0.0; 10];
    for i in 0..5 {
        x[2 * i] = -a[i];
        x[2 * i + 1] = a[i];
        wt[2 * i] = w[i];
        wt[2 * i + 1] = w[i];
    }
    (x, wt)
}

/// Draws from P(s) = (β+1) A s^β exp(−A s^(β+1)) by inverting the CDF.
pub fn brody_sample(beta: f64, n: usize, seed: u64) -> Vec<f64> {
    let a = gamma((beta + 2.0) / (beta + 1.0)).powf(beta + 1.0);
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let u: f64 = r.random();
            (-(1.0 - u).ln() / a).powf(1.0 / (beta + 1.0))
        })
        .collect()
}

/// ⟨(e·a)(e·b)(e·c)(e·d)⟩ over random unit vectors e.
pub fn orientation_monte_carlo(v: [[f64; 3]; 4], samples: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let mut acc = 0.0;
    for _ in 0..samples {
        let z: f64 = r.random_range(-1.0..1.0);
        let phi: f64 = r.random_range(0.0..2.0 * PI);
        let s = (1.0 - z * z).sqrt();
        let e = [s * phi.cos(), s * phi.sin(), z];
        let p: f64 = v.iter().map(|x| e[0] * x[0] + e[1] * x[1] + e[2] * x[2]).product();
        acc += p;
    }
    acc / samples as f64
}

pub fn random_unit(r: &mut impl Rng) -> [f64; 3] {
    let z: f64 = r.random_range(-1.0..1.0);
    let phi: f64 = r.random_range(0.0..2.0 * PI);
    let s = (1.0 - z * z).sqrt();
    [s * phi.cos(), s * phi.sin(), z]
}
