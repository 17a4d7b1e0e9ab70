//! Infection reduction per unit of lost activity as the penalty rises at a strict cap.
//!
//! ```text
//! cargo run --release --example efficiency_curve
//! ```

use distancing_game::experiments::{efficiency_sweep, linspace_step};
use distancing_game::{Policy, SimulationConfig};

fn main() -> distancing_game::Result<()> {
    let base = SimulationConfig::default().with_policy(Policy::new(0.1, 0.0)?);
    let rows = efficiency_sweep(&base, &linspace_step(0.5, 1.4, 0.05))?;
    println!("  c     Ẑ        Θ̂        E");
    for r in rows {
        let e = r.efficiency.map_or("undefined".to_string(), |e| format!("{e:.4}"));
        println!("{:.2}  {:.5}  {:.5}  {e}", r.c, r.infection_reduction, r.activity_loss);
    }
    Ok(())
}
