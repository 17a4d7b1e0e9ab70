//! Exempting the recovered from the cap, with and without reinfection.
//!
//! Letting immune people mix dilutes contacts while immunity holds; once
//! they can be reinfected the exemption costs more than it saves.
//!
//! ```text
//! cargo run --release --example segmented_reinfection
//! ```

use distancing_game::experiments::{linspace_step, run_sweep, SweepSpec};
use distancing_game::SimulationConfig;

fn main() -> distancing_game::Result<()> {
    let mut spec = SweepSpec::new(vec![0.4], vec![0.4], SimulationConfig::default());
    spec.phi = Some(linspace_step(0.0, 0.4, 0.05));
    spec.segmented_c_recovered = Some(0.1);
    let table = run_sweep(&spec)?;

    println!(" φ     Z(uniform)  Z(exempt)   difference");
    for &phi in spec.phi.as_ref().unwrap() {
        let z = |seg| {
            table
                .get(0.4, 0.4, phi, seg)
                .and_then(|r| r.outcome)
                .unwrap()
                .total_infections
        };
        println!(
            "{phi:.2}  {:>10.5}  {:>10.5}  {:>+10.5}",
            z(false),
            z(true),
            z(true) - z(false)
        );
    }
    Ok(())
}
