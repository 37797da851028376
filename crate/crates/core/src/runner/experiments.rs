use super::output::{num, Table};
use super::{run_ordered, Experiment, InitialKind, MsdMetric, RealizationRecord, RunConfig, RunnerError};
use crate::dynamics::{propagate, relative_deviation, D1State, IntegratorConfig, SinkSpec, System};
use crate::model::{build_geometry, build_phonon_bath, CouplingParams, DisorderSpec, PhononBath, RingGeometry, RingModel};
use crate::observables::{
    fit_power_law, steady_state_summary, DistanceMetric, ObservableSeries, PowerLawFit, SteadyStateSummary,
    MEAN_COUPLING_CM1, SERIES_NAMES,
};
use crate::spectroscopy::{
    build_amplitude_table, linear_absorption, response_functions, spectrum_2d, Absorption, AmplitudeTableConfig,
    BathLineshapeParams, LineshapeTable, ResponseConfig, Spectra2D, Spectrum2D,
};
use crate::statics::{beta_energy_map, diagonalize, ipr_spectrum, unfold_ensemble, SpectralRealization, WindowFit, WindowSpec};
use crate::C64;

/// A PNG to render next to the CSVs when plots are requested.
#[derive(Debug, Clone, PartialEq)]
pub enum PlotSpec {
    Lines { name: String, curves: Vec<(Vec<f64>, Vec<f64>)> },
    Heat { name: String, values: Vec<f64>, rows: usize, cols: usize, diverging: bool },
}

/// Ensemble-reduced results of one experiment, in memory.
#[derive(Debug, Clone)]
pub enum ExperimentData {
    Statics { realizations: Vec<SpectralRealization>, windows: Vec<WindowFit> },
    Dynamics { series: ObservableSeries, steady: Option<SteadyStateSummary>, msd_fit: Option<PowerLawFit> },
    Spectra { spectra: Spectra2D, absorption: Absorption },
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub tables: Vec<Table>,
    pub records: Vec<RealizationRecord>,
    /// Headline scalars as (key, value), in a fixed order.
    pub summary: Vec<(String, f64)>,
    pub plots: Vec<PlotSpec>,
    pub data: ExperimentData,
}

/// Shared immutable inputs of every realization.
pub struct Setup {
    pub geometry: RingGeometry,
    pub coupling: CouplingParams,
    pub bath: PhononBath,
}

impl Setup {
    pub fn new(cfg: &RunConfig) -> Result<Self, RunnerError> {
        let g = &cfg.geometry;
        let geometry = build_geometry(
            g.n_sites,
            g.radius_angstrom,
            (g.intra_distance_angstrom, g.inter_distance_angstrom),
            (g.intra_angle_deg, g.inter_angle_deg),
        )
        .map_err(|e| RunnerError::Config(format!("[geometry]: {e}")))?;
        let c = &cfg.coupling;
        let coupling = CouplingParams {
            j1_intra: c.j1_intra_cm1,
            j2_inter: c.j2_inter_cm1,
            dipole_constant: c.dipole_constant_angstrom3_cm1,
            site_energy_baseline: c.site_energy_cm1,
        };
        let b = &cfg.bath;
        let bath = build_phonon_bath(g.n_sites, b.omega0_cm1, b.bandwidth_w, b.huang_rhys_s)
            .map_err(|e| RunnerError::Config(format!("[bath]: {e}")))?;
        Ok(Self { geometry, coupling, bath })
    }

    pub fn model(&self, cfg: &RunConfig, realization: usize) -> Result<RingModel, String> {
        let spec = DisorderSpec {
            sigma_e: cfg.disorder.sigma_e_cm1,
            sigma_j: cfg.disorder.sigma_j_cm1,
            seed: cfg.seed,
            realization_index: realization as u64,
        };
        RingModel::build(self.geometry.clone(), &self.coupling, &spec).map_err(|e| e.to_string())
    }

    pub fn system(&self, cfg: &RunConfig, model: &RingModel, with_sink: bool) -> Result<System, String> {
        let mut sys = System::new(&model.exciton, &self.bath)
            .map_err(|e| e.to_string())?
            .with_regularization(cfg.integrator.regularization_eps)
            .with_energy_reference(cfg.coupling.site_energy_cm1);
        if with_sink {
            let sink = SinkSpec::site(model.n_sites(), cfg.sink.site, cfg.sink.gamma_omega0);
            sys = sys.with_sink(&sink).map_err(|e| e.to_string())?;
        }
        Ok(sys)
    }
}

pub fn initial_state(cfg: &RunConfig) -> D1State {
    let n = cfg.geometry.n_sites;
    match cfg.initial.kind {
        InitialKind::Site => D1State::localized(n, n, cfg.initial.site),
        InitialKind::PlaneWave => {
            let mut st = D1State::localized(n, n, 0);
            let k = 2.0 * std::f64::consts::PI * cfg.initial.k_index as f64 / n as f64;
            let amp = 1.0 / (n as f64).sqrt();
            for (j, a) in st.alpha.iter_mut().enumerate() {
                *a = C64::from_polar(amp, k * j as f64);
            }
            st
        }
    }
}

pub fn run_experiment(cfg: &RunConfig, threads: usize) -> Result<ExperimentOutput, RunnerError> {
    let setup = Setup::new(cfg)?;
    match cfg.experiment {
        Experiment::Statics => run_statics(cfg, &setup, threads),
        Experiment::Dynamics | Experiment::Transfer | Experiment::Msd => run_dynamics(cfg, &setup, threads),
        Experiment::Spectra => run_spectra(cfg, &setup, threads),
    }
}

fn all_excluded(records: &[RealizationRecord]) -> RunnerError {
    RunnerError::ExclusionBudget { excluded: records.len(), total: records.len() }
}

fn run_statics(cfg: &RunConfig, setup: &Setup, threads: usize) -> Result<ExperimentOutput, RunnerError> {
    let mut realizations = Vec::with_capacity(cfg.ensemble_size);
    let records = run_ordered(
        cfg.ensemble_size,
        threads,
        |r| {
            let model = setup.model(cfg, r)?;
            diagonalize(&model.exciton).map_err(|e| e.to_string())
        },
        |_, spec| {
            realizations.push(spec);
            None
        },
    )?;
    if realizations.is_empty() {
        return Err(all_excluded(&records));
    }
    let (se, sj) = (num(cfg.disorder.sigma_e_cm1), num(cfg.disorder.sigma_j_cm1));
    let mut ipr = Table::new("ipr_vs_energy.csv", &["sigma_e_cm1", "sigma_j_cm1", "energy_cm1", "ipr"]);
    for spec in &realizations {
        for (e, p) in ipr_spectrum(spec) {
            ipr.push(vec![se.clone(), sj.clone(), num(e), num(p)]);
        }
    }
    let ensemble = unfold_ensemble(&realizations)?;
    let windows = beta_energy_map(&ensemble, &WindowSpec::Quantile(cfg.statics.energy_windows))?;
    let mut brody = Table::new(
        "brody_map.csv",
        &["sigma_e_cm1", "sigma_j_cm1", "window_lo_cm1", "window_hi_cm1", "n_spacings", "beta", "class"],
    );
    let mut summary = vec![("mean_unfolded_spacing".to_string(), ensemble.mean())];
    for (w, win) in windows.iter().enumerate() {
        let (beta, class) = match &win.fit {
            Some(f) => (num(f.beta), f.class().as_str().to_string()),
            None => (String::new(), "unfitted".to_string()),
        };
        brody.push(vec![se.clone(), sj.clone(), num(win.lo), num(win.hi), win.n_spacings.to_string(), beta, class]);
        summary.push((format!("window{w}_lo_cm1"), win.lo));
        summary.push((format!("window{w}_hi_cm1"), win.hi));
        summary.push((format!("window{w}_beta"), win.fit.map_or(f64::NAN, |f| f.beta)));
    }
    let plots = vec![PlotSpec::Lines {
        name: "brody_map.png".into(),
        curves: vec![(
            windows.iter().map(|w| 0.5 * (w.lo + w.hi)).collect(),
            windows.iter().map(|w| w.fit.map_or(f64::NAN, |f| f.beta)).collect(),
        )],
    }];
    Ok(ExperimentOutput {
        tables: vec![ipr, brody],
        records,
        summary,
        plots,
        data: ExperimentData::Statics { realizations, windows },
    })
}

fn series_column(name: &str) -> &'static str {
    match name {
        "lc" => "lc_sites",
        "ipr_rho" => "ipr_rho_sites",
        "ipr_rho_fourth" => "ipr_rho_fourth_sites",
        "ls" => "ls_single_dipole_units",
        "msd_nm2" => "msd_nm2",
        "norm" => "norm",
        "p_sink" => "p_sink",
        "e_ex" => "e_ex_omega0",
        "e_bath" => "e_bath_omega0",
        "e_int" => "e_int_omega0",
        "e_total" => "e_total_omega0",
        "delta_dev" => "delta_dev_omega0",
        _ => "value",
    }
}

fn grid_table(name: &str, index_col: &str, value_col: &str, times: &[f64], index: &[String], grid: &[Vec<f64>]) -> Table {
    let mut t = Table::new(name, &["time_fs", index_col, value_col]);
    for (time, row) in times.iter().zip(grid) {
        let ts = num(*time);
        for (i, v) in index.iter().zip(row) {
            t.push(vec![ts.clone(), i.clone(), num(*v)]);
        }
    }
    t
}

fn run_dynamics(cfg: &RunConfig, setup: &Setup, threads: usize) -> Result<ExperimentOutput, RunnerError> {
    let with_sink = cfg.sink_enabled();
    let icfg = IntegratorConfig {
        dt: cfg.integrator.dt_fs,
        t_max: cfg.integrator.t_max_fs,
        record_stride: cfg.integrator.record_stride,
        regularization_eps: cfg.integrator.regularization_eps,
    };
    let metric = match cfg.analysis.msd_metric {
        MsdMetric::Chord => DistanceMetric::Chord,
        MsdMetric::Arc => DistanceMetric::Arc,
    };
    let start = initial_state(cfg);
    let origin = match cfg.initial.kind {
        InitialKind::Site => cfg.initial.site,
        InitialKind::PlaneWave => 0,
    };
    let mut acc = ObservableSeries::default();
    let mut count = 0usize;
    let mut reduce_err = None;
    let records = run_ordered(
        cfg.ensemble_size,
        threads,
        |r| {
            let model = setup.model(cfg, r)?;
            let sys = setup.system(cfg, &model, with_sink)?;
            let traj = propagate(&start, &sys, &icfg).map_err(|e| e.to_string())?;
            let series = ObservableSeries::from_trajectory(&traj, &sys, &model.geometry, &setup.bath.q_grid, origin, metric)
                .map_err(|e| e.to_string())?;
            Ok((series, relative_deviation(&traj, &sys)))
        },
        |_, (series, sigma_dev)| {
            if let Err(e) = acc.accumulate(&series) {
                reduce_err.get_or_insert(e);
            }
            count += 1;
            sigma_dev
        },
    )?;
    if let Some(e) = reduce_err {
        return Err(e.into());
    }
    if count == 0 {
        return Err(all_excluded(&records));
    }
    acc.scale(1.0 / count as f64);

    let mut tables = Vec::new();
    let mut summary = Vec::new();
    for (name, values) in SERIES_NAMES.iter().zip(&acc.scalars) {
        let mut t = Table::new(format!("trajectory_{name}.csv"), &["time_fs", series_column(name)]);
        for (time, v) in acc.times.iter().zip(values) {
            t.push(vec![num(*time), num(*v)]);
        }
        tables.push(t);
        summary.push((format!("final_{name}"), values.last().copied().unwrap_or(f64::NAN)));
    }
    let n = cfg.geometry.n_sites;
    let sites: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let ks: Vec<String> = setup.bath.q_grid.iter().map(|&k| num(k)).collect();
    tables.push(grid_table("trajectory_populations.csv", "site", "population", &acc.times, &sites, &acc.populations));
    tables.push(grid_table("trajectory_n_k.csv", "k_rad", "n_k", &acc.times, &ks, &acc.n_k));
    tables.push(grid_table("trajectory_xi_n.csv", "site", "xi_n", &acc.times, &sites, &acc.xi_n));

    let sigma = cfg.disorder.sigma_e_cm1.max(cfg.disorder.sigma_j_cm1);
    let [lo, hi] = cfg.analysis.steady_window_fs;
    let steady = steady_state_summary(&acc.times, &acc.scalars[0], &acc.scalars[1], (lo, hi), sigma).ok();
    if let Some(s) = &steady {
        let mut t = Table::new("steady_state.csv", &["window_lo_fs", "window_hi_fs", "sigma_over_j", "assc_sites", "ass_ipr_sites"]);
        t.push(vec![num(lo), num(hi), num(sigma / MEAN_COUPLING_CM1), num(s.assc), num(s.ass_ipr)]);
        tables.push(t);
        summary.push(("assc".into(), s.assc));
        summary.push(("ass_ipr".into(), s.ass_ipr));
    }
    let [flo, fhi] = cfg.analysis.msd_fit_window_fs;
    let msd_fit = fit_power_law(&acc.times, &acc.scalars[4], (flo, fhi)).ok();
    if let Some(f) = &msd_fit {
        let mut t = Table::new("msd_fit.csv", &["window_lo_fs", "window_hi_fs", "n_points", "exponent", "prefactor_nm2_per_fs_pow"]);
        t.push(vec![num(flo), num(fhi), f.n_points.to_string(), num(f.exponent), num(f.prefactor)]);
        tables.push(t);
        summary.push(("msd_exponent".into(), f.exponent));
    }
    let mut rt = Table::new("realizations.csv", &["realization", "status", "sigma_dev"]);
    for r in &records {
        rt.push(vec![r.index.to_string(), r.status.to_string(), r.sigma_dev.map(num).unwrap_or_default()]);
    }
    tables.push(rt);

    let flat = |g: &[Vec<f64>]| g.iter().flatten().copied().collect::<Vec<f64>>();
    let line = |name: &str, ids: &[usize]| PlotSpec::Lines {
        name: name.into(),
        curves: ids.iter().map(|&i| (acc.times.clone(), acc.scalars[i].clone())).collect(),
    };
    let rows = acc.times.len();
    let plots = vec![
        line("coherence.png", &[0, 1]),
        line("energy.png", &[7, 8, 9, 10, 11]),
        line("msd.png", &[4]),
        line("sink.png", &[6]),
        PlotSpec::Heat { name: "populations.png".into(), values: flat(&acc.populations), rows, cols: n, diverging: false },
        PlotSpec::Heat { name: "n_k.png".into(), values: flat(&acc.n_k), rows, cols: n, diverging: false },
        PlotSpec::Heat { name: "xi_n.png".into(), values: flat(&acc.xi_n), rows, cols: n, diverging: true },
    ];
    Ok(ExperimentOutput { tables, records, summary, plots, data: ExperimentData::Dynamics { series: acc, steady, msd_fit } })
}

/// Response-grid sizes for the spectra section: (n points per axis, T_w steps).
pub fn spectra_grid(cfg: &RunConfig) -> Result<(usize, usize), RunnerError> {
    let s = &cfg.spectra;
    let n = (s.t_max_fs / s.step_fs).round() as usize + 1;
    let kw = (s.t_w_fs / s.step_fs).round();
    if (kw * s.step_fs - s.t_w_fs).abs() > 1e-9 * s.step_fs {
        return Err(RunnerError::Config(format!(
            "spectra.t_w_fs = {} (fs): must be a multiple of spectra.step_fs = {}",
            s.t_w_fs, s.step_fs
        )));
    }
    Ok((n, kw as usize))
}

fn crop(s: &Spectrum2D, lo: f64, hi: f64) -> Spectrum2D {
    let keep = |w: &[f64]| -> Vec<usize> { (0..w.len()).filter(|&i| w[i] >= lo && w[i] <= hi).collect() };
    let (ia, ja) = (keep(&s.omega_tau), keep(&s.omega_t));
    let intensity = ia.iter().flat_map(|&i| ja.iter().map(move |&j| (i, j))).map(|(i, j)| s.at(i, j)).collect();
    Spectrum2D {
        omega_tau: ia.iter().map(|&i| s.omega_tau[i]).collect(),
        omega_t: ja.iter().map(|&j| s.omega_t[j]).collect(),
        intensity,
        kind: s.kind,
    }
}

fn spectrum_table(name: &str, s: &Spectrum2D) -> Table {
    let mut t = Table::new(name, &["omega_tau_omega0", "omega_t_omega0", "intensity"]);
    for (i, wt) in s.omega_tau.iter().enumerate() {
        let a = num(*wt);
        for (j, w) in s.omega_t.iter().enumerate() {
            t.push(vec![a.clone(), num(*w), num(s.at(i, j))]);
        }
    }
    t
}

fn run_spectra(cfg: &RunConfig, setup: &Setup, threads: usize) -> Result<ExperimentOutput, RunnerError> {
    let s = &cfg.spectra;
    let (n, kw) = spectra_grid(cfg)?;
    let span = (n - 1) as f64 * s.step_fs;
    let table_cfg = AmplitudeTableConfig {
        dt: s.dt_fs,
        sample_step: s.step_fs,
        t_forward: 2.0 * span + s.t_w_fs,
        t_backward: span,
        explicit_backward: false,
    };
    let l = &cfg.lineshape;
    let params = BathLineshapeParams {
        lambda0: l.lambda0_cm1,
        gamma0: l.gamma0_cm1,
        temperature: l.temperature_k,
        matsubara_tol: l.matsubara_tol,
        matsubara_max: l.matsubara_max,
    };
    let lineshape = LineshapeTable::new(&params, s.step_fs, 2 * (n - 1) + kw)?;
    if !lineshape.all_converged {
        log::warn!("Matsubara sum hit the cap of {} terms before the tolerance", l.matsubara_max);
    }
    let rcfg = ResponseConfig { n_tau: n, n_t: n, t_w: s.t_w_fs };
    let omega0 = crate::units::cm1_to_rad_fs(cfg.bath.omega0_cm1);

    let mut acc: Option<Spectra2D> = None;
    let mut count = 0usize;
    let records = run_ordered(
        cfg.ensemble_size,
        threads,
        |r| {
            let model = setup.model(cfg, r)?;
            let sys = setup.system(cfg, &model, false)?;
            let table = build_amplitude_table(&sys, &table_cfg).map_err(|e| e.to_string())?;
            let omega: Vec<f64> = (0..sys.n_modes()).map(|q| sys.omega(q)).collect();
            let grid = response_functions(&table, &model.geometry.dipoles, &omega, &lineshape, &rcfg).map_err(|e| e.to_string())?;
            spectrum_2d(&grid, omega0, s.pad_factor).map_err(|e| e.to_string())
        },
        |_, sp| {
            match &mut acc {
                None => acc = Some(sp),
                Some(a) => {
                    for (x, y) in [(&mut a.rephasing, &sp.rephasing), (&mut a.nonrephasing, &sp.nonrephasing), (&mut a.total, &sp.total)] {
                        x.intensity.iter_mut().zip(&y.intensity).for_each(|(u, v)| *u += v);
                    }
                }
            }
            count += 1;
            None
        },
    )?;
    let Some(mut spectra) = acc else {
        return Err(all_excluded(&records));
    };
    for x in [&mut spectra.rephasing, &mut spectra.nonrephasing, &mut spectra.total] {
        x.intensity.iter_mut().for_each(|v| *v /= count as f64);
    }
    let absorption = linear_absorption(&spectra.total);
    let (lo, hi) = (s.omega_min_omega0, s.omega_max_omega0);
    let total = crop(&spectra.total, lo, hi);
    let mut abs_table = Table::new("absorption.csv", &["omega_omega0", "intensity"]);
    for (w, v) in absorption.omega.iter().zip(&absorption.intensity) {
        if *w >= lo && *w <= hi {
            abs_table.push(vec![num(*w), num(*v)]);
        }
    }
    let (pt, pw, _) = spectra.total.peak();
    let mut summary = vec![("peak_omega_tau_omega0".to_string(), pt), ("peak_omega_t_omega0".to_string(), pw)];
    if let Some((w, _)) = absorption.peak() {
        summary.push(("absorption_peak_omega0".into(), w));
    }
    summary.push(("absorption_fwhm_omega0".into(), absorption.fwhm().unwrap_or(f64::NAN)));
    let plots = vec![
        PlotSpec::Heat {
            name: "spectrum2d.png".into(),
            values: total.intensity.clone(),
            rows: total.omega_tau.len(),
            cols: total.omega_t.len(),
            diverging: true,
        },
        PlotSpec::Lines { name: "absorption.png".into(), curves: vec![(absorption.omega.clone(), absorption.intensity.clone())] },
    ];
    let tables = vec![
        spectrum_table("spectrum2d.csv", &total),
        spectrum_table("spectrum2d_rephasing.csv", &crop(&spectra.rephasing, lo, hi)),
        spectrum_table("spectrum2d_nonrephasing.csv", &crop(&spectra.nonrephasing, lo, hi)),
        abs_table,
    ];
    Ok(ExperimentOutput { tables, records, summary, plots, data: ExperimentData::Spectra { spectra, absorption } })
}
