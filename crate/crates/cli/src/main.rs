use clap::{Args, Parser, Subcommand};
use polaring::runner::{
    dump_model, load_config, reproduce_figure, run_in, Experiment, RunConfig, RunnerError, Threads, FIGURES,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exciton-polaron dynamics and spectroscopy of disordered molecular rings.
#[derive(Parser)]
#[command(name = "polaring", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write K, the phonon bath and the geometry as CSV.
    DumpModel(Common),
    /// Eigenstate IPR and Brody level statistics.
    Statics(Common),
    /// Closed or open D1 dynamics averaged over disorder.
    Dynamics(Common),
    /// Dynamics with the sink switched on.
    Transfer(Common),
    /// Mean squared displacement and its power-law exponent.
    Msd(Common),
    /// 2D photon-echo and linear absorption spectra.
    Spectra(Common),
    /// Run the experiment named in the configuration file.
    Run(Common),
    /// Reproduce the parameter grid of one figure.
    Figure {
        /// fig2 ... fig10
        name: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Overwrite a non-empty output directory.
    #[arg(long)]
    force: bool,
    /// Also write PNG previews.
    #[arg(long)]
    plots: bool,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    ensemble: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// cm⁻¹
    #[arg(long, allow_hyphen_values = true)]
    sigma_e: Option<f64>,
    /// cm⁻¹
    #[arg(long, allow_hyphen_values = true)]
    sigma_j: Option<f64>,
    #[arg(long)]
    huang_rhys: Option<f64>,
    #[arg(long)]
    bandwidth: Option<f64>,
    /// cm⁻¹
    #[arg(long)]
    omega0: Option<f64>,
    /// Sink rate in units of ω₀.
    #[arg(long)]
    gamma_sink: Option<f64>,
    #[arg(long)]
    sink_site: Option<usize>,
    #[arg(long)]
    initial_site: Option<usize>,
    /// fs
    #[arg(long)]
    tmax: Option<f64>,
    /// fs
    #[arg(long)]
    dt: Option<f64>,
    /// Waiting time, fs.
    #[arg(long)]
    tw: Option<f64>,
    /// cm⁻¹
    #[arg(long)]
    lambda0: Option<f64>,
    /// cm⁻¹
    #[arg(long)]
    gamma0: Option<f64>,
    /// K
    #[arg(long)]
    temperature: Option<f64>,
}

impl Common {
    fn resolve(&self, experiment: Option<Experiment>) -> Result<RunConfig, RunnerError> {
        let mut c = match &self.config {
            Some(p) => load_config(p)?,
            None => RunConfig::default(),
        };
        if let Some(e) = experiment {
            c.experiment = e;
        }
        if let Some(v) = &self.output {
            c.output_dir = v.clone();
        }
        c.plots |= self.plots;
        if let Some(v) = self.threads {
            c.threads = Threads::Count(v);
        }
        if let Some(v) = self.ensemble {
            c.ensemble_size = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.sigma_e {
            c.disorder.sigma_e_cm1 = v;
        }
        if let Some(v) = self.sigma_j {
            c.disorder.sigma_j_cm1 = v;
        }
        if let Some(v) = self.huang_rhys {
            c.bath.huang_rhys_s = v;
        }
        if let Some(v) = self.bandwidth {
            c.bath.bandwidth_w = v;
        }
        if let Some(v) = self.omega0 {
            c.bath.omega0_cm1 = v;
        }
        if let Some(v) = self.gamma_sink {
            c.sink.gamma_omega0 = v;
            c.sink.enabled = Some(v > 0.0);
        }
        if let Some(v) = self.sink_site {
            c.sink.site = v;
        }
        if let Some(v) = self.initial_site {
            c.initial.site = v;
        }
        if let Some(v) = self.tmax {
            c.integrator.t_max_fs = v;
        }
        if let Some(v) = self.dt {
            c.integrator.dt_fs = v;
        }
        if let Some(v) = self.tw {
            c.spectra.t_w_fs = v;
        }
        if let Some(v) = self.lambda0 {
            c.lineshape.lambda0_cm1 = v;
        }
        if let Some(v) = self.gamma0 {
            c.lineshape.gamma0_cm1 = v;
        }
        if let Some(v) = self.temperature {
            c.lineshape.temperature_k = v;
        }
        c.validate()?;
        Ok(c)
    }
}

fn run(cli: Cli) -> Result<(), RunnerError> {
    let (common, experiment) = match &cli.command {
        Command::DumpModel(c) => {
            let cfg = c.resolve(None)?;
            for f in dump_model(&cfg, c.force)? {
                println!("{}", cfg.output_dir.join(&f.name).display());
            }
            return Ok(());
        }
        Command::Figure { name, common } => {
            if !FIGURES.contains(&name.as_str()) {
                return Err(RunnerError::UnknownFigure(name.clone()));
            }
            let cfg = common.resolve(None)?;
            let dir = common.output.clone().unwrap_or_else(|| PathBuf::from(name));
            reproduce_figure(name, &cfg, common.ensemble, &dir, common.force)?;
            println!("{}", dir.join("summary.csv").display());
            return Ok(());
        }
        Command::Statics(c) => (c, Some(Experiment::Statics)),
        Command::Dynamics(c) => (c, Some(Experiment::Dynamics)),
        Command::Transfer(c) => (c, Some(Experiment::Transfer)),
        Command::Msd(c) => (c, Some(Experiment::Msd)),
        Command::Spectra(c) => (c, Some(Experiment::Spectra)),
        Command::Run(c) => (c, None),
    };
    let cfg = common.resolve(experiment)?;
    let out = run_in(&cfg, common.force)?;
    for f in &out.manifest.files {
        println!("{}", cfg.output_dir.join(&f.name).display());
    }
    for (k, v) in &out.output.summary {
        log::info!("{k} = {v}");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
