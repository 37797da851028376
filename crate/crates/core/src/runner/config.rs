use super::RunnerError;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Statics,
    Dynamics,
    Transfer,
    Spectra,
    Msd,
}

impl Experiment {
    pub fn as_str(&self) -> &'static str {
        match self {
            Experiment::Statics => "statics",
            Experiment::Dynamics => "dynamics",
            Experiment::Transfer => "transfer",
            Experiment::Spectra => "spectra",
            Experiment::Msd => "msd",
        }
    }
}

/// Worker count: a fixed number or `"auto"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "ThreadsRepr", into = "ThreadsRepr")]
pub enum Threads {
    #[default]
    Auto,
    Count(usize),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ThreadsRepr {
    Count(usize),
    Word(String),
}

impl TryFrom<ThreadsRepr> for Threads {
    type Error = String;
    fn try_from(r: ThreadsRepr) -> Result<Self, String> {
        match r {
            ThreadsRepr::Count(0) => Err("threads must be at least 1".into()),
            ThreadsRepr::Count(n) => Ok(Threads::Count(n)),
            ThreadsRepr::Word(w) if w == "auto" => Ok(Threads::Auto),
            ThreadsRepr::Word(w) => Err(format!("threads must be a positive integer or \"auto\", got {w:?}")),
        }
    }
}

impl From<Threads> for ThreadsRepr {
    fn from(t: Threads) -> Self {
        match t {
            Threads::Auto => ThreadsRepr::Word("auto".into()),
            Threads::Count(n) => ThreadsRepr::Count(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    pub n_sites: usize,
    pub radius_angstrom: f64,
    pub intra_distance_angstrom: f64,
    pub inter_distance_angstrom: f64,
    pub intra_angle_deg: f64,
    pub inter_angle_deg: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            n_sites: 16,
            radius_angstrom: 23.0,
            intra_distance_angstrom: 9.1,
            inter_distance_angstrom: 8.9,
            intra_angle_deg: 167.5,
            inter_angle_deg: 147.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CouplingConfig {
    pub j1_intra_cm1: f64,
    pub j2_inter_cm1: f64,
    pub dipole_constant_angstrom3_cm1: f64,
    pub site_energy_cm1: f64,
}

impl Default for CouplingConfig {
    fn default() -> Self {
        Self { j1_intra_cm1: 594.0, j2_inter_cm1: 491.0, dipole_constant_angstrom3_cm1: 640_725.0, site_energy_cm1: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct DisorderConfig {
    pub sigma_e_cm1: f64,
    pub sigma_j_cm1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BathConfig {
    pub omega0_cm1: f64,
    pub bandwidth_w: f64,
    pub huang_rhys_s: f64,
}

impl Default for BathConfig {
    fn default() -> Self {
        Self { omega0_cm1: 1670.0, bandwidth_w: 0.5, huang_rhys_s: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorSection {
    pub dt_fs: f64,
    pub t_max_fs: f64,
    pub record_stride: usize,
    pub regularization_eps: f64,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        Self { dt_fs: 0.05, t_max_fs: 300.0, record_stride: 20, regularization_eps: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    /// α_n = δ_{n,site}
    Site,
    /// α_n = e^{ikn}/√N with k = 2π·k_index/N
    PlaneWave,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialConfig {
    pub kind: InitialKind,
    pub site: usize,
    pub k_index: i64,
}

impl Default for InitialConfig {
    fn default() -> Self {
        Self { kind: InitialKind::Site, site: 8, k_index: -1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SinkConfig {
    /// Leave unset to use the experiment default (on for `transfer`).
    pub enabled: Option<bool>,
    pub gamma_omega0: f64,
    pub site: usize,
}

impl Default for SinkConfig {
    fn default() -> Self {
        Self { enabled: None, gamma_omega0: 0.1, site: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LineshapeConfig {
    pub lambda0_cm1: f64,
    pub gamma0_cm1: f64,
    pub temperature_k: f64,
    pub matsubara_tol: f64,
    pub matsubara_max: usize,
}

impl Default for LineshapeConfig {
    fn default() -> Self {
        Self { lambda0_cm1: 100.0, gamma0_cm1: 35.0, temperature_k: 77.0, matsubara_tol: 1e-8, matsubara_max: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectraConfig {
    pub t_w_fs: f64,
    pub step_fs: f64,
    pub t_max_fs: f64,
    pub pad_factor: usize,
    /// Integrator step for the amplitude tables.
    pub dt_fs: f64,
    /// Emitted frequency range, ω₀ units.
    pub omega_min_omega0: f64,
    pub omega_max_omega0: f64,
}

impl Default for SpectraConfig {
    fn default() -> Self {
        Self {
            t_w_fs: 0.0,
            step_fs: 2.0,
            t_max_fs: 400.0,
            pad_factor: 4,
            dt_fs: 0.05,
            omega_min_omega0: -2.5,
            omega_max_omega0: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StaticsConfig {
    pub energy_windows: usize,
}

impl Default for StaticsConfig {
    fn default() -> Self {
        Self { energy_windows: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MsdMetric {
    Chord,
    Arc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub steady_window_fs: [f64; 2],
    pub msd_fit_window_fs: [f64; 2],
    pub msd_metric: MsdMetric,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { steady_window_fs: [150.0, 300.0], msd_fit_window_fs: [1.6, 16.0], msd_metric: MsdMetric::Chord }
    }
}

/// Complete, validated description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub ensemble_size: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub threads: Threads,
    pub plots: bool,
    pub geometry: GeometryConfig,
    pub coupling: CouplingConfig,
    pub disorder: DisorderConfig,
    pub bath: BathConfig,
    pub integrator: IntegratorSection,
    pub initial: InitialConfig,
    pub sink: SinkConfig,
    pub lineshape: LineshapeConfig,
    pub spectra: SpectraConfig,
    pub statics: StaticsConfig,
    pub analysis: AnalysisConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Dynamics,
            ensemble_size: 100,
            seed: 1,
            output_dir: PathBuf::from("output"),
            threads: Threads::Auto,
            plots: false,
            geometry: Default::default(),
            coupling: Default::default(),
            disorder: Default::default(),
            bath: Default::default(),
            integrator: Default::default(),
            initial: Default::default(),
            sink: Default::default(),
            lineshape: Default::default(),
            spectra: Default::default(),
            statics: Default::default(),
            analysis: Default::default(),
        }
    }
}

fn invalid(key: &str, unit: &str, value: impl std::fmt::Display, reason: &str) -> RunnerError {
    RunnerError::Config(format!("{key} = {value} ({unit}): {reason}"))
}

fn positive(key: &str, unit: &str, v: f64) -> Result<(), RunnerError> {
    if v > 0.0 && v.is_finite() { Ok(()) } else { Err(invalid(key, unit, v, "must be positive and finite")) }
}

fn non_negative(key: &str, unit: &str, v: f64) -> Result<(), RunnerError> {
    if v >= 0.0 && v.is_finite() { Ok(()) } else { Err(invalid(key, unit, v, "must be non-negative and finite")) }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, RunnerError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| RunnerError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), RunnerError> {
        if self.ensemble_size == 0 {
            return Err(invalid("ensemble_size", "count", 0, "must be at least 1"));
        }
        let g = &self.geometry;
        if g.n_sites < 4 || g.n_sites % 2 != 0 {
            return Err(invalid("geometry.n_sites", "count", g.n_sites, "must be even and at least 4"));
        }
        positive("geometry.radius_angstrom", "Å", g.radius_angstrom)?;
        positive("geometry.intra_distance_angstrom", "Å", g.intra_distance_angstrom)?;
        positive("geometry.inter_distance_angstrom", "Å", g.inter_distance_angstrom)?;
        for (key, v) in [("geometry.intra_angle_deg", g.intra_angle_deg), ("geometry.inter_angle_deg", g.inter_angle_deg)] {
            if !(0.0..=180.0).contains(&v) {
                return Err(invalid(key, "degrees", v, "must lie in [0, 180]"));
            }
        }
        let c = &self.coupling;
        for (key, v) in [
            ("coupling.j1_intra_cm1", c.j1_intra_cm1),
            ("coupling.j2_inter_cm1", c.j2_inter_cm1),
            ("coupling.dipole_constant_angstrom3_cm1", c.dipole_constant_angstrom3_cm1),
            ("coupling.site_energy_cm1", c.site_energy_cm1),
        ] {
            if !v.is_finite() {
                return Err(invalid(key, "cm⁻¹", v, "must be finite"));
            }
        }
        non_negative("disorder.sigma_e_cm1", "cm⁻¹", self.disorder.sigma_e_cm1)?;
        non_negative("disorder.sigma_j_cm1", "cm⁻¹", self.disorder.sigma_j_cm1)?;
        positive("bath.omega0_cm1", "cm⁻¹", self.bath.omega0_cm1)?;
        if !(0.0..=1.0).contains(&self.bath.bandwidth_w) {
            return Err(invalid("bath.bandwidth_w", "dimensionless", self.bath.bandwidth_w, "must lie in [0, 1]"));
        }
        non_negative("bath.huang_rhys_s", "dimensionless", self.bath.huang_rhys_s)?;
        let i = &self.integrator;
        positive("integrator.dt_fs", "fs", i.dt_fs)?;
        positive("integrator.t_max_fs", "fs", i.t_max_fs)?;
        if i.record_stride == 0 {
            return Err(invalid("integrator.record_stride", "steps", 0, "must be at least 1"));
        }
        positive("integrator.regularization_eps", "dimensionless", i.regularization_eps)?;
        if self.initial.site >= g.n_sites {
            return Err(invalid("initial.site", "index", self.initial.site, "must be a site of the ring"));
        }
        non_negative("sink.gamma_omega0", "ω₀", self.sink.gamma_omega0)?;
        if self.sink.site >= g.n_sites {
            return Err(invalid("sink.site", "index", self.sink.site, "must be a site of the ring"));
        }
        let l = &self.lineshape;
        non_negative("lineshape.lambda0_cm1", "cm⁻¹", l.lambda0_cm1)?;
        positive("lineshape.gamma0_cm1", "cm⁻¹", l.gamma0_cm1)?;
        positive("lineshape.temperature_k", "K", l.temperature_k)?;
        positive("lineshape.matsubara_tol", "relative", l.matsubara_tol)?;
        if l.matsubara_max == 0 {
            return Err(invalid("lineshape.matsubara_max", "count", 0, "must be at least 1"));
        }
        let s = &self.spectra;
        non_negative("spectra.t_w_fs", "fs", s.t_w_fs)?;
        positive("spectra.step_fs", "fs", s.step_fs)?;
        positive("spectra.t_max_fs", "fs", s.t_max_fs)?;
        positive("spectra.dt_fs", "fs", s.dt_fs)?;
        if s.t_max_fs < s.step_fs {
            return Err(invalid("spectra.t_max_fs", "fs", s.t_max_fs, "must cover at least one step"));
        }
        if s.pad_factor == 0 {
            return Err(invalid("spectra.pad_factor", "count", 0, "must be at least 1"));
        }
        if !(s.omega_min_omega0 < s.omega_max_omega0) {
            return Err(invalid("spectra.omega_min_omega0", "ω₀", s.omega_min_omega0, "must be below omega_max_omega0"));
        }
        if self.statics.energy_windows == 0 {
            return Err(invalid("statics.energy_windows", "count", 0, "must be at least 1"));
        }
        for (key, [lo, hi]) in
            [("analysis.steady_window_fs", self.analysis.steady_window_fs), ("analysis.msd_fit_window_fs", self.analysis.msd_fit_window_fs)]
        {
            if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
                return Err(invalid(key, "fs", format!("[{lo}, {hi}]"), "must be an increasing non-negative pair"));
            }
        }
        Ok(())
    }

    /// Whether the sink is active for this run.
    pub fn sink_enabled(&self) -> bool {
        self.sink.enabled.unwrap_or(self.experiment == Experiment::Transfer) && self.sink.gamma_omega0 > 0.0
    }

    /// SHA-256 of the physics content (output location and thread count excluded).
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut c = self.clone();
        c.output_dir = PathBuf::new();
        c.threads = Threads::Auto;
        c.plots = false;
        let json = serde_json::to_string(&c).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

/// Read and validate a TOML run configuration. An empty file gives the defaults.
pub fn load_config(path: &Path) -> Result<RunConfig, RunnerError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunnerError::Config(format!("{}: {e}", path.display())))?;
    RunConfig::from_toml_str(&text).map_err(|e| match e {
        RunnerError::Config(msg) => RunnerError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}
