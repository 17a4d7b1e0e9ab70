//! Total infections against the activity cap at two penalties: stricter caps
//! help until people stop complying, then the curve rebounds.
//!
//! ```text
//! cargo run --release --example policy_sweep
//! ```

use distancing_game::experiments::{linspace_step, run_sweep, SweepSpec};
use distancing_game::SimulationConfig;

fn main() -> distancing_game::Result<()> {
    let caps = linspace_step(0.05, 1.0, 0.05);
    let spec = SweepSpec::new(caps.clone(), vec![0.5, 0.8], SimulationConfig::default());
    let table = run_sweep(&spec)?;

    println!(" α̃     Z(c=0.5)   Z(c=0.8)");
    for &a in &caps {
        let z = |c| {
            table
                .get(a, c, 0.0, false)
                .and_then(|r| r.outcome)
                .map(|o| o.total_infections)
        };
        println!(
            "{a:.2}  {:>9.5}  {:>9.5}",
            z(0.5).unwrap_or(f64::NAN),
            z(0.8).unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
