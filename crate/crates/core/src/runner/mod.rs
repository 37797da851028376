//! Configuration, ensemble scheduling, persistence and figure grids.

mod config;
mod ensemble;
mod experiments;
mod figures;
mod output;
mod plot;

pub use config::{
    load_config, AnalysisConfig, BathConfig, CouplingConfig, DisorderConfig, Experiment, GeometryConfig, InitialConfig,
    InitialKind, IntegratorSection, LineshapeConfig, MsdMetric, RunConfig, SinkConfig, SpectraConfig, StaticsConfig, Threads,
};
pub use ensemble::{check_budget, resolve_threads, run_ordered, RealizationRecord, EXCLUSION_BUDGET, THREADS_ENV};
pub use experiments::{
    initial_state, run_experiment, spectra_grid, ExperimentData, ExperimentOutput, PlotSpec, Setup,
};
pub use figures::{default_ensemble, figure_panels, reproduce_figure, Panel, FIGURES};
pub use output::{
    num, prepare_output_dir, write_manifest, write_table, FileEntry, RunManifest, SigmaDevStats, Table, MANIFEST_NAME,
};
pub use plot::{heat_map, line_plot};

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("output directory {0} is not empty (use --force to overwrite)")]
    OutputExists(PathBuf),
    #[error("{excluded} of {total} realizations excluded, above the 1% budget")]
    ExclusionBudget { excluded: usize, total: usize },
    #[error("unknown figure {0:?}; valid names: fig2 fig3 fig4 fig5 fig6 fig7 fig8 fig9 fig10")]
    UnknownFigure(String),
    #[error(transparent)]
    Statics(#[from] crate::statics::StaticsError),
    #[error(transparent)]
    Observable(#[from] crate::observables::ObservableError),
    #[error(transparent)]
    Spectroscopy(#[from] crate::spectroscopy::SpectroscopyError),
}

impl RunnerError {
    /// Process exit code: 2 for configuration problems, 3 for a blown exclusion budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunnerError::Config(_) | RunnerError::UnknownFigure(_) | RunnerError::OutputExists(_) => 2,
            RunnerError::ExclusionBudget { .. } => 3,
            _ => 1,
        }
    }
}

/// A completed run: what was written and the in-memory results.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub output: ExperimentOutput,
}

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// Run `cfg.experiment` into `cfg.output_dir`: CSVs, optional PNGs and a
/// manifest. The manifest is written before the exclusion budget is checked,
/// so a failed run still documents what was excluded.
pub fn run_in(cfg: &RunConfig, force: bool) -> Result<RunOutcome, RunnerError> {
    cfg.validate()?;
    let dir = cfg.output_dir.as_path();
    prepare_output_dir(dir, force)?;
    let threads = resolve_threads(cfg.threads);
    let started = unix_now();
    let clock = Instant::now();
    let output = run_experiment(cfg, threads)?;
    let mut files = Vec::with_capacity(output.tables.len());
    for t in &output.tables {
        files.push(write_table(dir, t)?);
    }
    if cfg.plots {
        for p in &output.plots {
            render(dir, p)?;
        }
    }
    let excluded = output.records.iter().filter(|r| !r.ok()).count();
    let manifest = RunManifest {
        experiment: cfg.experiment.as_str().to_string(),
        config_hash: cfg.hash(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix_s: started,
        finished_unix_s: unix_now(),
        wall_time_s: clock.elapsed().as_secs_f64(),
        threads,
        ensemble_size: cfg.ensemble_size,
        excluded,
        sigma_dev: SigmaDevStats::from_records(&output.records),
        files,
        realizations: output.records.clone(),
        config: cfg.clone(),
    };
    write_manifest(dir, &manifest)?;
    check_budget(&output.records)?;
    Ok(RunOutcome { manifest, output })
}

fn render(dir: &Path, p: &PlotSpec) -> Result<(), RunnerError> {
    match p {
        PlotSpec::Lines { name, curves } => {
            let c: Vec<(&[f64], &[f64])> = curves.iter().map(|(x, y)| (x.as_slice(), y.as_slice())).collect();
            line_plot(&dir.join(name), &c)
        }
        PlotSpec::Heat { name, values, rows, cols, diverging } => heat_map(&dir.join(name), values, *rows, *cols, *diverging),
    }
}

/// Write K (realization 0 of the configured disorder), the phonon bath and the
/// ring geometry as CSV.
pub fn dump_model(cfg: &RunConfig, force: bool) -> Result<Vec<FileEntry>, RunnerError> {
    cfg.validate()?;
    let dir = cfg.output_dir.as_path();
    prepare_output_dir(dir, force)?;
    let setup = Setup::new(cfg)?;
    let model = setup.model(cfg, 0).map_err(RunnerError::Config)?;
    let n = model.n_sites();
    let mut k = Table::new("exciton_matrix.csv", &["row", "col", "k_cm1"]);
    for i in 0..n {
        for j in 0..n {
            k.push(vec![i.to_string(), j.to_string(), num(model.exciton.k[(i, j)])]);
        }
    }
    let b = &setup.bath;
    let mut bath = Table::new("phonon_bath.csv", &["mode", "q_rad", "omega_cm1", "g"]);
    for q in 0..b.n_modes {
        bath.push(vec![q.to_string(), num(b.q_grid[q]), num(b.omega_q[q]), num(b.g_q[q])]);
    }
    let g = &model.geometry;
    let mut geo = Table::new(
        "geometry.csv",
        &["site", "x_angstrom", "y_angstrom", "z_angstrom", "dipole_x", "dipole_y", "dipole_z"],
    );
    for i in 0..n {
        let (p, d) = (g.positions[i], g.dipoles[i]);
        geo.push(vec![i.to_string(), num(p[0]), num(p[1]), num(p[2]), num(d[0]), num(d[1]), num(d[2])]);
    }
    [k, bath, geo].iter().map(|t| write_table(dir, t)).collect()
}
