use std::path::PathBuf;
use std::str::FromStr;

use anyhow::Context;
use clap::Parser;

use becprobe_cli::{run_scenario, RunConfig, ScenarioId};

/// Lambda-scheme condensate probe simulator: run a preset scenario and write
/// its CSV artifacts plus a manifest of the resolved configuration.
#[derive(Parser)]
#[command(name = "becprobe", version, about)]
struct Cli {
    /// Scenario preset: fig2, fig3, fig4, fig5, fig6, table1, susceptibility,
    /// spectrum, dynamics or timescales.
    scenario: String,

    /// Configuration file (flat `key = value` lines, `#` comments).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Inline overrides, e.g. --set quantum.n0=16 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output directory (overrides output.dir and BECPROBE_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let scenario = ScenarioId::from_str(&cli.scenario)?;

    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    for (i, assignment) in cli.set.iter().enumerate() {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| anyhow::anyhow!("--set expects KEY=VALUE, got `{assignment}`"))?;
        cfg.set(key.trim(), value.trim(), i + 1)
            .map_err(|e| anyhow::anyhow!("--set {assignment}: {}", e.message))?;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.display().to_string();
    }

    let written = run_scenario(scenario, &cfg)?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}
