//! Batch experiments and file output.

pub mod config;
pub mod eqmap;
pub mod export;
pub mod sweep;

pub use config::ExperimentConfig;
pub use eqmap::{equilibrium_map, EquilibriumMap, MapCell};
pub use sweep::{
    efficiency_sweep, run_sweep, run_sweep_with_trajectories, EfficiencyRow, ResultRow, ResultTable, SweepSpec,
};

/// `start, start + step, ...` up to `stop` inclusive, rounded to 12 decimals
/// so that `0.05 * k` style grids hit their nominal values.
pub fn linspace_step(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || stop < start {
        return Vec::new();
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|k| {
            let v = start + step * k as f64;
            (v * 1e12).round() / 1e12
        })
        .collect()
}
