mod common;

use common::*;
use nalgebra::DMatrix;
use polaring::dynamics::{deviation_at, eom_rhs, propagate, IntegratorConfig, System};
use polaring::model::{build_phonon_bath, CouplingParams, DisorderSpec, RingGeometry, RingModel};
use polaring::spectroscopy::{
    build_amplitude_table, lineshape_g, orientation_factor, response_functions, AmplitudeTableConfig,
    BathLineshapeParams, LineshapeTable, ResponseConfig,
};
use polaring::statics::{diagonalize, fit_brody};
use polaring::C64;

fn disordered_ring(sigma_e: f64, sigma_j: f64, huang_rhys: f64, index: u64) -> (RingModel, System) {
    let spec = DisorderSpec { sigma_e, sigma_j, seed: 7, realization_index: index };
    let model = RingModel::build(RingGeometry::default(), &CouplingParams::default(), &spec).unwrap();
    let bath = build_phonon_bath(16, 1670.0, 0.5, huang_rhys).unwrap();
    let sys = System::new(&model.exciton, &bath).unwrap();
    (model, sys)
}

fn k_rad(sys: &System) -> DMatrix<f64> {
    let n = sys.n_sites();
    DMatrix::from_fn(n, n, |a, b| sys.k(a, b))
}

#[test]
fn eigenvalues_match_jacobi_rotations() {
    for (i, (se, sj)) in [(0.0, 0.0), (300.0, 0.0), (0.0, 300.0), (700.0, 700.0)].into_iter().enumerate() {
        let (model, _) = disordered_ring(se, sj, 0.0, i as u64);
        let got = diagonalize(&model.exciton).unwrap().energies;
        let want = jacobi_eigenvalues(&model.exciton.k);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-7, "{g} vs {w}");
        }
    }
}

#[test]
fn bare_exciton_amplitudes_match_matrix_exponential() {
    let (_, sys) = disordered_ring(150.0, 80.0, 0.0, 3);
    let cfg = IntegratorConfig { dt: 0.02, t_max: 40.0, record_stride: 250, regularization_eps: 1e-8 };
    let start = polaring::dynamics::D1State::localized(16, 16, 5);
    let traj = propagate(&start, &sys, &cfg).unwrap();
    let k = k_rad(&sys);
    for snap in &traj.snapshots {
        let u = propagator(&k, snap.time());
        for n in 0..16 {
            assert!((snap.state.alpha[n] - u[(n, 5)]).norm() < 1e-8, "t = {} site {n}", snap.time());
        }
    }
}

#[test]
fn weakly_coupled_trimer_tracks_fock_dynamics() {
    let sys = trimer_system(0.02);
    let fock = Fock::new(3, 3, 6);
    let mut psi = fock.localized(0);
    let cfg = IntegratorConfig { dt: 0.01, t_max: 50.0, record_stride: 100, regularization_eps: 1e-8 };
    let traj = propagate(&polaring::dynamics::D1State::localized(3, 3, 0), &sys, &cfg).unwrap();
    let mut worst: f64 = 0.0;
    for (i, snap) in traj.snapshots.iter().enumerate() {
        if i > 0 {
            for _ in 0..10 {
                fock.step(&sys, &mut psi, 0.1);
            }
        }
        let exact = fock.populations(&psi);
        for n in 0..3 {
            worst = worst.max((snap.state.alpha[n].norm_sqr() - exact[n]).abs());
        }
    }
    assert!(worst < 0.01, "max population error {worst}");
}

#[test]
fn fock_propagation_is_exact_without_phonons() {
    let sys = trimer_system(0.0);
    let fock = Fock::new(3, 3, 3);
    let mut psi = fock.localized(1);
    for _ in 0..100 {
        fock.step(&sys, &mut psi, 0.2);
    }
    let u = propagator(&k_rad(&sys), 20.0);
    let p = fock.populations(&psi);
    for n in 0..3 {
        assert!((p[n] - u[(n, 1)].norm_sqr()).abs() < 1e-12);
    }
}

#[test]
fn deviation_matches_converged_fock_residual() {
    let sys = trimer_system(0.5);
    let fock = Fock::new(3, 3, 16);
    let cfg = IntegratorConfig { dt: 0.01, t_max: 50.0, record_stride: 500, regularization_eps: 1e-8 };
    let traj = propagate(&polaring::dynamics::D1State::localized(3, 3, 0), &sys, &cfg).unwrap();
    for snap in &traj.snapshots {
        let v = eom_rhs(&snap.state, &sys).unwrap();
        let brute = fock.deviation(&sys, &snap.state, &v);
        let algebra = deviation_at(&snap.state, &sys).unwrap();
        assert!((brute - algebra).abs() < 1e-8, "t = {}: {brute} vs {algebra}", snap.time());
    }
}

#[test]
fn trimer_response_matches_eigenbasis() {
    let sys = trimer_system(0.0);
    let mut r = rng(11);
    let dipoles: Vec<[f64; 3]> = (0..3).map(|_| random_unit(&mut r)).collect();
    let step = 2.0;
    let n = 8;
    for kw in [0usize, 2] {
        let span = (2 * (n - 1) + kw) as f64 * step;
        let cfg = AmplitudeTableConfig { dt: 0.01, sample_step: step, t_forward: span, t_backward: span, explicit_backward: false };
        let table = build_amplitude_table(&sys, &cfg).unwrap();
        let ls =
            LineshapeTable::new(&BathLineshapeParams { lambda0: 0.0, ..Default::default() }, step, 2 * n + kw).unwrap();
        let omega: Vec<f64> = (0..3).map(|q| sys.omega(q)).collect();
        let tw = kw as f64 * step;
        let grid = response_functions(&table, &dipoles, &omega, &ls, &ResponseConfig { n_tau: n, n_t: n, t_w: tw }).unwrap();
        let k = k_rad(&sys);
        for i in 0..n {
            for j in 0..n {
                let want = eigen_response(&k, &dipoles, grid.tau_grid[i], tw, grid.t_grid[j]);
                let got = [grid.r1[i * n + j], grid.r2[i * n + j], grid.r3[i * n + j], grid.r4[i * n + j]];
                for (g, w) in got.iter().zip(&want) {
                    assert!((g - w).norm() < 1e-8, "T_w = {tw}, ({i}, {j}): {g} vs {w}");
                }
            }
        }
    }
}

#[test]
fn lineshape_matches_quadrature() {
    let p = BathLineshapeParams::default();
    for t in [0.5, 5.0, 20.0, 80.0, 200.0] {
        let g = lineshape_g(t, &p).unwrap().g;
        let q = g_quadrature(t, p.lambda0, p.gamma0, p.temperature);
        assert!((g - q).norm() < 1e-6 * q.norm().max(1e-3), "t = {t}: {g} vs {q}");
    }
}

#[test]
fn orientation_factor_matches_monte_carlo() {
    let mut r = rng(5);
    let v: Vec<[f64; 3]> = (0..4).map(|_| random_unit(&mut r)).collect();
    let exact = orientation_factor(&v, 0, 1, 2, 3);
    let mc = orientation_monte_carlo([v[0], v[1], v[2], v[3]], 4_000_000, 9);
    assert!((exact - mc).abs() < 1e-3, "{exact} vs {mc}");
    let same = orientation_factor(&v, 0, 0, 0, 0);
    assert!((same - 0.2).abs() < 1e-14);
}

#[test]
fn brody_refit_recovers_beta() {
    for beta in [0.0, 0.3, 0.7, 1.0] {
        let s = brody_sample(beta, 100_000, 17 + (beta * 10.0) as u64);
        let fit = fit_brody(&s).unwrap();
        assert!((fit.beta - beta).abs() < 0.05, "β = {beta}: fitted {}", fit.beta);
    }
}

#[test]
fn equations_of_motion_minimize_fock_residual() {
    let sys = trimer_system(0.5);
    let fock = Fock::new(3, 3, 14);
    let cfg = IntegratorConfig { dt: 0.01, t_max: 20.0, record_stride: 2000, regularization_eps: 1e-8 };
    let traj = propagate(&polaring::dynamics::D1State::localized(3, 3, 0), &sys, &cfg).unwrap();
    let s = &traj.snapshots[1].state;
    let v = eom_rhs(s, &sys).unwrap();
    let base = fock.deviation(&sys, s, &v).powi(2);
    let eps = 1e-3;
    for idx in 0..12 {
        for dir in [C64::new(1.0, 0.0), C64::i()] {
            let shifted = |sign: f64| {
                let mut w = v.clone();
                let slot = if idx < 3 { &mut w.dalpha[idx] } else { &mut w.dlambda[idx - 3] };
                *slot += dir * (sign * eps);
                fock.deviation(&sys, s, &w).powi(2)
            };
            let (up, down) = (shifted(1.0), shifted(-1.0));
            let grad = (up - down) / (2.0 * eps);
            let curv = (up + down - 2.0 * base) / (eps * eps);
            assert!(grad.abs() < 1e-6 * curv, "parameter {idx}: gradient {grad}, curvature {curv}");
            assert!(up > base && down > base);
        }
    }
}
