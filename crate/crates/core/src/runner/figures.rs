use super::output::{num, prepare_output_dir, write_table, Table};
use super::{run_in, DisorderConfig, Experiment, InitialKind, RunConfig, RunnerError};
use crate::observables::MEAN_COUPLING_CM1;
use std::path::Path;

pub const FIGURES: [&str; 9] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"];

const S_GRID: [f64; 4] = [0.0, 0.5, 1.0, 1.5];

/// One run of a figure's parameter grid.
#[derive(Debug, Clone)]
pub struct Panel {
    pub label: String,
    pub config: RunConfig,
}

fn disorder(e: f64, j: f64) -> DisorderConfig {
    DisorderConfig { sigma_e_cm1: e, sigma_j_cm1: j }
}

fn s_label(s: f64) -> String {
    format!("S{s}")
}

/// Default ensemble size of a figure.
pub fn default_ensemble(name: &str) -> usize {
    match name {
        "fig2" => 10_000,
        "fig9" => 200,
        _ => 1000,
    }
}

/// The parameter grid behind a figure, built on top of `base`.
pub fn figure_panels(name: &str, base: &RunConfig, ensemble: Option<usize>) -> Result<Vec<Panel>, RunnerError> {
    let size = ensemble.unwrap_or_else(|| default_ensemble(name));
    let mut panels = Vec::new();
    let mut push = |label: String, f: &dyn Fn(&mut RunConfig)| {
        let mut c = base.clone();
        c.ensemble_size = size;
        f(&mut c);
        if c.disorder.sigma_e_cm1 == 0.0 && c.disorder.sigma_j_cm1 == 0.0 {
            c.ensemble_size = 1;
        }
        panels.push(Panel { label, config: c });
    };
    match name {
        "fig2" => {
            let sigmas = [0.0, 50.0, 100.0, 200.0, 300.0, 400.0, 500.0, 600.0, 700.0, 800.0, 900.0, 1000.0];
            for (kind, e, j) in [("diagonal", 1.0, 0.0), ("offdiagonal", 0.0, 1.0), ("both", 1.0, 1.0)] {
                for s in sigmas {
                    push(format!("{kind}_sigma{s}"), &|c| {
                        c.experiment = Experiment::Statics;
                        c.disorder = disorder(e * s, j * s);
                    });
                }
            }
        }
        "fig3" => {
            for (tag, e, j) in
                [("clean", 0.0, 0.0), ("sigmaE100", 100.0, 0.0), ("sigmaJ100", 0.0, 100.0), ("sigmaE300", 300.0, 0.0), ("sigmaJ300", 0.0, 300.0)]
            {
                for s in S_GRID {
                    push(format!("{tag}_{}", s_label(s)), &|c| {
                        c.experiment = Experiment::Dynamics;
                        c.disorder = disorder(e, j);
                        c.bath.huang_rhys_s = s;
                    });
                }
            }
        }
        "fig4" => {
            for (kind, e, j) in [("diagonal", 1.0, 0.0), ("offdiagonal", 0.0, 1.0)] {
                for ratio in [0.18, 0.55, 0.92, 1.30] {
                    for s in S_GRID {
                        let sigma = ratio * MEAN_COUPLING_CM1;
                        push(format!("{kind}_ratio{ratio}_{}", s_label(s)), &|c| {
                            c.experiment = Experiment::Dynamics;
                            c.disorder = disorder(e * sigma, j * sigma);
                            c.bath.huang_rhys_s = s;
                        });
                    }
                }
            }
        }
        "fig5" => {
            for sigma in [100.0, 300.0] {
                for (init, kind) in [("k-1", InitialKind::PlaneWave), ("site8", InitialKind::Site)] {
                    for s in S_GRID {
                        push(format!("sigmaE{sigma}_{init}_{}", s_label(s)), &|c| {
                            c.experiment = Experiment::Dynamics;
                            c.disorder = disorder(sigma, 0.0);
                            c.bath.huang_rhys_s = s;
                            c.initial.kind = kind;
                            c.initial.k_index = -1;
                            c.initial.site = 8;
                        });
                    }
                }
            }
        }
        "fig6" => {
            for (kind, e, j) in [("diagonal", 300.0, 0.0), ("offdiagonal", 0.0, 300.0), ("both", 300.0, 300.0)] {
                for s in S_GRID {
                    push(format!("{kind}_{}", s_label(s)), &|c| {
                        c.experiment = Experiment::Transfer;
                        c.disorder = disorder(e, j);
                        c.bath.huang_rhys_s = s;
                        c.sink.enabled = Some(true);
                        c.sink.gamma_omega0 = 0.1;
                        c.sink.site = 0;
                        c.initial.kind = InitialKind::Site;
                        c.initial.site = 8;
                    });
                }
            }
        }
        "fig7" => {
            for sigma in [100.0, 300.0] {
                for s in S_GRID {
                    push(format!("sigmaE{sigma}_{}", s_label(s)), &|c| {
                        c.experiment = Experiment::Transfer;
                        c.disorder = disorder(sigma, 0.0);
                        c.bath.huang_rhys_s = s;
                        c.sink.enabled = Some(true);
                        c.sink.gamma_omega0 = 0.1;
                        c.sink.site = 0;
                        c.initial.kind = InitialKind::Site;
                        c.initial.site = 8;
                    });
                }
            }
        }
        "fig8" => {
            for s in [0.5, 1.0] {
                push(format!("sigmaE100_{}", s_label(s)), &|c| {
                    c.experiment = Experiment::Dynamics;
                    c.disorder = disorder(100.0, 0.0);
                    c.bath.huang_rhys_s = s;
                });
            }
        }
        "fig9" => {
            for (tag, e, j) in [("clean", 0.0, 0.0), ("sigmaE100", 100.0, 0.0), ("sigmaJ100", 0.0, 100.0)] {
                push(tag.to_string(), &|c| {
                    c.experiment = Experiment::Spectra;
                    c.disorder = disorder(e, j);
                    c.bath.huang_rhys_s = 0.5;
                    c.bath.bandwidth_w = 0.5;
                    c.spectra.t_w_fs = 0.0;
                });
            }
        }
        "fig10" => {
            for (kind, e, j) in [("diagonal", 1.0, 0.0), ("offdiagonal", 0.0, 1.0)] {
                for sigma in [100.0, 300.0, 500.0, 700.0] {
                    for s in S_GRID {
                        push(format!("{kind}_sigma{sigma}_{}", s_label(s)), &|c| {
                            c.experiment = Experiment::Msd;
                            c.disorder = disorder(e * sigma, j * sigma);
                            c.bath.huang_rhys_s = s;
                            c.integrator.t_max_fs = 50.0;
                            c.integrator.record_stride = 4;
                        });
                    }
                }
            }
        }
        other => return Err(RunnerError::UnknownFigure(other.to_string())),
    }
    Ok(panels)
}

/// Run every panel of a figure into `<dir>/<label>/` and write `summary.csv`
/// (panel, key, value) with each panel's headline scalars.
pub fn reproduce_figure(
    name: &str,
    base: &RunConfig,
    ensemble: Option<usize>,
    dir: &Path,
    force: bool,
) -> Result<Table, RunnerError> {
    let panels = figure_panels(name, base, ensemble)?;
    prepare_output_dir(dir, force)?;
    let mut summary = Table::new("summary.csv", &["panel", "key", "value"]);
    for p in &panels {
        log::info!("{name}: panel {} ({} realizations)", p.label, p.config.ensemble_size);
        let mut cfg = p.config.clone();
        cfg.output_dir = dir.join(&p.label);
        let out = run_in(&cfg, force)?;
        for (k, v) in &out.output.summary {
            summary.push(vec![p.label.clone(), k.clone(), num(*v)]);
        }
    }
    write_table(dir, &summary)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let base = RunConfig::default();
        let f4 = figure_panels("fig4", &base, Some(3)).unwrap();
        assert_eq!(f4.len(), 32);
        assert!(f4.iter().all(|p| p.config.ensemble_size == 3));
        let f6 = figure_panels("fig6", &base, None).unwrap();
        assert!(f6.iter().all(|p| p.config.sink_enabled() && p.config.sink.site == 0 && p.config.initial.site == 8));
        assert!(f6.iter().all(|p| p.config.sink.gamma_omega0 == 0.1 && p.config.ensemble_size == 1000));
        let f2 = figure_panels("fig2", &base, None).unwrap();
        assert_eq!(f2.len(), 36);
        assert_eq!(f2[1].config.ensemble_size, 10_000);
        assert_eq!(f2[0].config.ensemble_size, 1);
        assert_eq!(f2.iter().map(|p| p.config.disorder.sigma_e_cm1).fold(0.0, f64::max), 1000.0);
        for name in FIGURES {
            assert!(!figure_panels(name, &base, Some(2)).unwrap().is_empty());
        }
        assert!(matches!(figure_panels("fig11", &base, None), Err(RunnerError::UnknownFigure(_))));
    }
}
