//! Writing a trajectory, a sweep table, and a prevalence panel to CSV.
//!
//! ```text
//! cargo run --example export_csv -- /tmp/distancing-out
//! ```

use std::path::PathBuf;

use distancing_game::experiments::export::{write_prevalence_panel, write_result_table, write_trajectory};
use distancing_game::experiments::{run_sweep_with_trajectories, SweepSpec};
use distancing_game::simulator::simulate;
use distancing_game::{Policy, SimulationConfig};

fn main() -> distancing_game::Result<()> {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "distancing-out".into())
        .into();
    let base = SimulationConfig::default();

    write_trajectory(
        dir.join("trajectory.csv"),
        &simulate(&base.with_policy(Policy::new(0.3, 0.5)?))?,
    )?;

    let (table, trajs) = run_sweep_with_trajectories(&SweepSpec::new(vec![0.1, 0.2, 0.5, 1.0], vec![0.5], base))?;
    write_result_table(dir.join("sweep.csv"), &table)?;
    let runs: Vec<_> = table
        .rows
        .iter()
        .zip(&trajs)
        .filter_map(|(r, t)| t.as_ref().map(|t| (format!("i_{}", r.alpha_tilde), t)))
        .collect();
    write_prevalence_panel(dir.join("prevalence.csv"), &runs)?;
    println!("wrote trajectory.csv, sweep.csv, prevalence.csv to {}", dir.display());
    Ok(())
}
