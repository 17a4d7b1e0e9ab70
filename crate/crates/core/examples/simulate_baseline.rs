//! One year without a policy against one with a moderate cap.
//!
//! ```text
//! cargo run --example simulate_baseline
//! ```

use distancing_game::metrics::efficiency;
use distancing_game::simulator::simulate;
use distancing_game::{Policy, SimulationConfig};

fn main() -> distancing_game::Result<()> {
    let base = SimulationConfig::default();
    let none = simulate(&base)?;
    let capped = simulate(&base.with_policy(Policy::new(0.3, 0.5)?))?;
    let summary = efficiency(&capped, &none)?;

    println!("day        i(no policy)   i(α̃=0.3,c=0.5)  case  α_si");
    for (a, b) in none.records.iter().zip(&capped.records).step_by(30) {
        println!(
            "{:>3}  {:>16.6e}  {:>15.6e}  {:>4}  {:.4}",
            a.day,
            a.state.i,
            b.state.i,
            b.equilibrium.case.number(),
            b.equilibrium.si_activity()
        );
    }
    println!(
        "\ntotal infections {:.5} -> {:.5}",
        1.0 - none.last().unwrap().state.s,
        summary.total_infections
    );
    println!(
        "reduction Ẑ = {:.4}, activity loss Θ̂ = {:.4}",
        summary.infection_reduction, summary.activity_loss
    );
    println!("days per case {:?}", capped.case_histogram());
    Ok(())
}
