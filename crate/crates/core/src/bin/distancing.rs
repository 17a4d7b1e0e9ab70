//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 config error, 2 numerical error, 3 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use distancing_game::experiments::export::{
    write_efficiency, write_equilibrium_map, write_prevalence_panel, write_result_table, write_trajectory,
};
use distancing_game::experiments::{
    efficiency_sweep, equilibrium_map, linspace_step, run_sweep_with_trajectories, ExperimentConfig,
};
use distancing_game::metrics::efficiency;
use distancing_game::simulator::simulate;
use distancing_game::{EpidemicState, Error, Policy, Result};

#[derive(Debug, Parser)]
#[command(
    name = "distancing",
    version,
    about = "Epidemic dynamics under a social distancing game"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One closed-loop run under the configured policy.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every point of the configured (α̃, c[, φ]) grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equilibrium regime over the sweep grid at a fixed state.
    Eqmap {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated `s,i,q,r`.
        #[arg(long)]
        state: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Efficiency of the configured cap across penalties.
    Efficiency {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated penalties.
        #[arg(long)]
        c_grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("{what}: cannot parse {t:?}: {e}")))
        })
        .collect()
}

fn out_dir(cli: Option<PathBuf>, cfg: &ExperimentConfig) -> Result<PathBuf> {
    let dir = cli
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .ok_or_else(|| Error::Config("no output directory: pass --out or set output.dir".into()))?;
    std::fs::create_dir_all(&dir).map_err(|source| Error::Io {
        path: dir.clone(),
        source,
    })?;
    Ok(dir)
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("summary serializes");
    std::fs::write(path, text + "\n").map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate { config, out } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let sim = cfg.simulation_config()?;
            let dir = out_dir(out, &cfg)?;
            let traj = simulate(&sim)?;
            let baseline = simulate(&sim.with_policy(Policy::none()))?;
            let summary = efficiency(&traj, &baseline)?;
            write_trajectory(dir.join("trajectory.csv"), &traj)?;
            write_json(&dir.join("summary.json"), &summary)?;
            eprintln!(
                "Z = {:.6}, peak {:.6} on day {}",
                summary.total_infections, summary.peak_prevalence, summary.peak_day
            );
        }
        Command::Sweep { config, out } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let spec = cfg.sweep_spec()?;
            let dir = out_dir(out, &cfg)?;
            let (table, trajs) = run_sweep_with_trajectories(&spec)?;
            write_result_table(dir.join("sweep.csv"), &table)?;
            if cfg.output.prevalence_panel {
                let runs: Vec<(String, &_)> = table
                    .rows
                    .iter()
                    .zip(&trajs)
                    .filter_map(|(row, t)| {
                        let label = format!(
                            "i[alpha_tilde={},c={},phi={}{}]",
                            row.alpha_tilde,
                            row.c,
                            row.phi,
                            if row.segmented { ",segmented" } else { "" }
                        );
                        t.as_ref().map(|t| (label, t))
                    })
                    .collect();
                write_prevalence_panel(dir.join("prevalence.csv"), &runs)?;
            }
            let failed = table.failures().count();
            eprintln!("{} rows, {failed} failed", table.rows.len());
        }
        Command::Eqmap { config, state, out } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let v = parse_list(&state, "--state")?;
            let [s, i, q, r] = v[..] else {
                return Err(Error::Config(format!("--state needs 4 values, got {}", v.len())));
            };
            let state = EpidemicState::siqr(s, i, q, r).map_err(|e| Error::Config(format!("--state: {e}")))?;
            let (alpha_grid, c_grid) = match &cfg.sweep {
                Some(sw) => (sw.alpha_tilde.values(), sw.c.values()),
                None => (linspace_step(0.01, 1.0, 0.01), linspace_step(0.0, 1.0, 0.01)),
            };
            cfg.params.validate().map_err(|e| Error::Config(e.to_string()))?;
            let dir = out_dir(out, &cfg)?;
            let map = equilibrium_map(&state, &alpha_grid, &c_grid, &cfg.params)?;
            write_equilibrium_map(dir.join("eqmap.csv"), &map)?;
            let cases: Vec<u8> = map.cases_present().iter().map(|c| c.number()).collect();
            eprintln!("{} cells, cases present {cases:?}", map.cells.len());
        }
        Command::Efficiency { config, c_grid, out } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let sim = cfg.simulation_config()?;
            let grid = parse_list(&c_grid, "--c-grid")?;
            for &c in &grid {
                Policy::new(sim.policy.alpha_tilde, c).map_err(|e| Error::Config(format!("--c-grid: {e}")))?;
            }
            let dir = out_dir(out, &cfg)?;
            let rows = efficiency_sweep(&sim, &grid)?;
            write_efficiency(dir.join("efficiency.csv"), &rows)?;
            eprintln!("{} rows at alpha_tilde = {}", rows.len(), sim.policy.alpha_tilde);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
