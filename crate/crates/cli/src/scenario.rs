//! Scenario presets: each one computes a deterministic set of CSV artifacts
//! plus a manifest echoing the fully resolved configuration.

use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::Context;

use becprobe::{
    direct_poisson_sum, evolve_expectations, initial_state, optical_response, sector_spectrum,
    spectrum_relative_errors, susceptibilities, timescales, zero_order_expectations,
    EvolutionOrder, PhysicalConstants, TimeSeries,
};

use crate::config::RunConfig;

const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Table1,
    Susceptibility,
    Spectrum,
    Dynamics,
    Timescales,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 10] = [
        ScenarioId::Fig2,
        ScenarioId::Fig3,
        ScenarioId::Fig4,
        ScenarioId::Fig5,
        ScenarioId::Fig6,
        ScenarioId::Table1,
        ScenarioId::Susceptibility,
        ScenarioId::Spectrum,
        ScenarioId::Dynamics,
        ScenarioId::Timescales,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioId::Fig2 => "fig2",
            ScenarioId::Fig3 => "fig3",
            ScenarioId::Fig4 => "fig4",
            ScenarioId::Fig5 => "fig5",
            ScenarioId::Fig6 => "fig6",
            ScenarioId::Table1 => "table1",
            ScenarioId::Susceptibility => "susceptibility",
            ScenarioId::Spectrum => "spectrum",
            ScenarioId::Dynamics => "dynamics",
            ScenarioId::Timescales => "timescales",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioId {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScenarioId::ALL
            .iter()
            .find(|id| id.name() == s)
            .copied()
            .ok_or_else(|| {
                anyhow::anyhow!(
                    "unknown scenario `{s}`; expected one of {}",
                    ScenarioId::ALL.map(|i| i.name()).join(", ")
                )
            })
    }
}

/// Shortest round-trippable decimal form; integers print without exponent.
fn num(v: f64) -> String {
    format!("{v}")
}

/// One CSV artifact, built fully in memory before anything reaches disk.
struct Artifact {
    name: String,
    content: String,
}

fn series_csv(series: &TimeSeries) -> String {
    let mut out = String::from("t_ns,n_mean,n2_mean,q\n");
    for i in 0..series.times.len() {
        let q = series.q[i].map(num).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(series.times[i] * 1e9),
            num(series.n_mean[i]),
            num(series.n2_mean[i]),
            q
        );
    }
    out
}

/// Write a photon-statistics time series as CSV (t_ns, n_mean, n2_mean, q).
/// Undefined Q samples are left as empty fields.
pub fn write_series(series: &TimeSeries, path: &Path) -> anyhow::Result<()> {
    std::fs::write(path, series_csv(series)).with_context(|| format!("writing {}", path.display()))
}

fn delta_grid(cfg: &RunConfig) -> Vec<f64> {
    let lo = TAU * cfg.delta_min_over_2pi_hz;
    let hi = TAU * cfg.delta_max_over_2pi_hz;
    let n = cfg.delta_points;
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn time_grid(t_max: f64, samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|i| t_max * i as f64 / (samples - 1) as f64)
        .collect()
}

fn sweep_scenario(id: ScenarioId, cfg: &RunConfig) -> anyhow::Result<String> {
    let constants = PhysicalConstants::default();
    let medium = cfg.medium();
    let drive = cfg.drive();
    let ap = drive.probe_amplitude(&constants)?;
    let mut out = String::from(match id {
        ScenarioId::Fig2 => "delta_over_2pi_hz,n_p2_m2_per_v2,eta_p2_m_per_v2\n",
        ScenarioId::Fig3 => "delta_over_2pi_hz,n_g,v_g_m_per_s,eta_p_per_m\n",
        ScenarioId::Susceptibility => {
            "delta_over_2pi_hz,chi1_re,chi1_im,chi3_re_m2_per_v2,chi3_im_m2_per_v2\n"
        }
        _ => unreachable!(),
    });
    for delta in delta_grid(cfg) {
        let d = drive.with_delta(delta);
        let hz = num(delta / TAU);
        match id {
            ScenarioId::Fig2 => {
                let r = optical_response(&medium, &d, &constants, None)?;
                let _ = writeln!(out, "{hz},{},{}", num(r.n_p2), num(r.eta_p2));
            }
            ScenarioId::Fig3 => {
                let r = optical_response(&medium, &d, &constants, None)?;
                let vg = r.v_g.map(num).unwrap_or_default();
                let _ = writeln!(out, "{hz},{},{vg},{}", num(r.n_g), num(r.eta_total(ap)));
            }
            ScenarioId::Susceptibility => {
                let s = susceptibilities(&medium, &d, &constants)?;
                let _ = writeln!(
                    out,
                    "{hz},{},{},{},{}",
                    num(s.chi1.re),
                    num(s.chi1.im),
                    num(s.chi3.re),
                    num(s.chi3.im)
                );
            }
            _ => unreachable!(),
        }
    }
    Ok(out)
}

fn spectrum_scenario(id: ScenarioId, cfg: &RunConfig) -> anyhow::Result<String> {
    let (k1, k2) = cfg.quantum_couplings()?;
    let delta = cfg.quantum_delta();
    let omega_p = cfg.omega() - delta;
    let r = cfg.n_atoms / 2.0;
    let mut out = String::from(match id {
        ScenarioId::Fig4 => "M,deltaE_order0,deltaE_order1,deltaE_order2\n",
        ScenarioId::Spectrum => {
            "M,dim,mean_splitting_rad_per_s,deltaE_order0,deltaE_order1,deltaE_order2\n"
        }
        _ => unreachable!(),
    });
    for m in cfg.m_min..=cfg.m_max {
        let sector = becprobe::classify_sector(m, r, k1, k2)?;
        sector.require_valid()?;
        let spec = sector_spectrum(&sector, omega_p, delta, cfg.n_atoms)?;
        let [e0, e1, e2] = spectrum_relative_errors(&spec);
        match id {
            ScenarioId::Fig4 => {
                let _ = writeln!(out, "{m},{},{},{}", num(e0), num(e1), num(e2));
            }
            ScenarioId::Spectrum => {
                let _ = writeln!(
                    out,
                    "{m},{},{},{},{},{}",
                    sector.dim,
                    num(spec.exact.mean_splitting),
                    num(e0),
                    num(e1),
                    num(e2)
                );
            }
            _ => unreachable!(),
        }
    }
    Ok(out)
}

fn dynamics_artifacts(cfg: &RunConfig, prefix: &str) -> anyhow::Result<Vec<Artifact>> {
    let (k1, k2) = cfg.quantum_couplings()?;
    let delta = cfg.quantum_delta();
    let state = initial_state(cfg.n0, cfg.n_atoms, cfg.m_cutoff)?;
    let times = time_grid(cfg.t_max_ns * 1e-9, cfg.samples);
    let evolved = evolve_expectations(
        &state,
        k1,
        k2,
        delta,
        &times,
        EvolutionOrder::Perturbative(cfg.order),
    )?;
    let closed = zero_order_expectations(&state, k1, k2, delta, &times)?;
    Ok(vec![
        Artifact {
            name: format!("{prefix}_order{}.csv", cfg.order),
            content: series_csv(&evolved),
        },
        Artifact {
            name: format!("{prefix}_zero_order.csv"),
            content: series_csv(&closed),
        },
    ])
}

/// The three reference coupling pairs (k1/omega, k2/omega).
const COUPLING_ROWS: [(&str, f64, f64); 3] =
    [("a", 3e-7, -3e-9), ("b", 3e-7, -3e-10), ("c", 3e-6, -3e-10)];

fn table1_scenario(cfg: &RunConfig) -> anyhow::Result<String> {
    let omega = cfg.omega();
    let r = cfg.n_atoms / 2.0;
    let delta = cfg.quantum_delta();
    let mut out =
        String::from("row,k1_over_omega,k2_over_omega,T_R_ns,tau_col1_ns,tau_col2_ns,tau_rev_ns\n");
    for (row, k1r, k2r) in COUPLING_ROWS {
        let ts = timescales(cfg.n0, r, None, k1r * omega, k2r * omega, delta, false)?;
        let _ = writeln!(
            out,
            "{row},{},{},{},{},{},{}",
            num(k1r),
            num(k2r),
            num(ts.t_rabi * 1e9),
            num(ts.t_col_small_k2 * 1e9),
            ts.t_col_large_k2.map(|t| num(t * 1e9)).unwrap_or_default(),
            ts.t_revival.map(|t| num(t * 1e9)).unwrap_or_default(),
        );
    }
    Ok(out)
}

fn timescales_scenario(cfg: &RunConfig) -> anyhow::Result<String> {
    let (k1, k2) = cfg.quantum_couplings()?;
    let omega = cfg.omega();
    let r = cfg.n_atoms / 2.0;
    let ts = timescales(cfg.n0, r, None, k1, k2, cfg.quantum_delta(), true)?;
    let (applicable, branch) = ts.applicable_collapse();
    let mut out = String::from(
        "k1_over_omega,k2_over_omega,t_rabi_ns,tau_col1_ns,tau_col2_ns,tau_rev_ns,\
         applicable_collapse_ns,collapse_branch\n",
    );
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        num(k1 / omega),
        num(k2 / omega),
        num(ts.t_rabi * 1e9),
        num(ts.t_col_small_k2 * 1e9),
        ts.t_col_large_k2.map(|t| num(t * 1e9)).unwrap_or_default(),
        ts.t_revival.map(|t| num(t * 1e9)).unwrap_or_default(),
        num(applicable * 1e9),
        match branch {
            becprobe::CollapseBranch::SmallK2 => "small_k2",
            becprobe::CollapseBranch::LargeK2 => "large_k2",
        }
    );
    Ok(out)
}

fn fig6_artifacts(cfg: &RunConfig, prefix: &str) -> anyhow::Result<Vec<Artifact>> {
    let omega = cfg.omega();
    let r = cfg.n_atoms / 2.0;
    let delta = cfg.quantum_delta();
    let mut artifacts = Vec::new();
    for (row, k1r, k2r) in COUPLING_ROWS {
        let (k1, k2) = (k1r * omega, k2r * omega);
        let ts = timescales(cfg.n0, r, None, k1, k2, delta, false)?;
        let t_max = 1.45 * ts.t_revival.unwrap_or(100.0 * ts.t_rabi);
        // enough samples to resolve the Rabi oscillation, capped for sanity
        let samples = ((t_max / (ts.t_rabi / 8.0)).ceil() as usize)
            .max(cfg.samples)
            .min(200_000);
        let times = time_grid(t_max, samples);
        let n_mean = direct_poisson_sum(cfg.n0, r, k1, k2, delta, &times);
        let mut content = String::from("t_ns,n_mean\n");
        for (t, n) in times.iter().zip(&n_mean) {
            let _ = writeln!(content, "{},{}", num(t * 1e9), num(*n));
        }
        artifacts.push(Artifact {
            name: format!("{prefix}_row_{row}.csv"),
            content,
        });
    }
    Ok(artifacts)
}

fn manifest(id: ScenarioId, cfg: &RunConfig, outputs: &[PathBuf]) -> anyhow::Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "# becprobe run manifest");
    let _ = writeln!(out, "scenario = {}", id.name());
    let _ = writeln!(out, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# resolved configuration");
    out.push_str(&cfg.serialize());
    let _ = writeln!(out, "# derived quantities");
    let _ = writeln!(out, "# volume_m3 = {}", num(cfg.medium().volume()));
    if let Ok((k1, k2)) = cfg.quantum_couplings() {
        let _ = writeln!(out, "# k1_rad_per_s = {}", num(k1));
        let _ = writeln!(out, "# k2_rad_per_s = {}", num(k2));
    }
    let _ = writeln!(out, "# outputs");
    for p in outputs {
        let _ = writeln!(out, "# {}", p.display());
    }
    Ok(out)
}

/// Run one scenario: compute everything, then write the artifact set and the
/// manifest. Nothing is left behind on failure.
pub fn run_scenario(id: ScenarioId, cfg: &RunConfig) -> anyhow::Result<Vec<PathBuf>> {
    let prefix = if cfg.prefix.is_empty() {
        id.name().to_string()
    } else {
        cfg.prefix.clone()
    };
    let mut artifacts = match id {
        ScenarioId::Fig2 | ScenarioId::Fig3 | ScenarioId::Susceptibility => vec![Artifact {
            name: format!("{prefix}.csv"),
            content: sweep_scenario(id, cfg)?,
        }],
        ScenarioId::Fig4 | ScenarioId::Spectrum => vec![Artifact {
            name: format!("{prefix}.csv"),
            content: spectrum_scenario(id, cfg)?,
        }],
        ScenarioId::Fig5 | ScenarioId::Dynamics => dynamics_artifacts(cfg, &prefix)?,
        ScenarioId::Fig6 => fig6_artifacts(cfg, &prefix)?,
        ScenarioId::Table1 => vec![Artifact {
            name: format!("{prefix}.csv"),
            content: table1_scenario(cfg)?,
        }],
        ScenarioId::Timescales => vec![Artifact {
            name: format!("{prefix}.csv"),
            content: timescales_scenario(cfg)?,
        }],
    };

    let dir = if cfg.out_dir.is_empty() {
        std::env::var("BECPROBE_OUT_DIR").unwrap_or_else(|_| ".".into())
    } else {
        cfg.out_dir.clone()
    };
    let dir = PathBuf::from(dir);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let paths: Vec<PathBuf> = artifacts.iter().map(|a| dir.join(&a.name)).collect();
    let manifest_path = dir.join(format!("{prefix}_manifest.txt"));
    artifacts.push(Artifact {
        name: manifest_path
            .file_name()
            .unwrap()
            .to_string_lossy()
            .into_owned(),
        content: manifest(id, cfg, &paths)?,
    });

    let mut written: Vec<PathBuf> = Vec::new();
    for artifact in &artifacts {
        let path = dir.join(&artifact.name);
        if let Err(e) = std::fs::write(&path, &artifact.content)
            .with_context(|| format!("writing {}", path.display()))
        {
            for p in &written {
                let _ = std::fs::remove_file(p);
            }
            return Err(e);
        }
        written.push(path);
    }
    Ok(written)
}
