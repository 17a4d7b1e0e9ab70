//! Recovering the infection sensitivity `d` from observed activity.
//!
//! ```text
//! cargo run --example calibrate_sensitivity
//! ```

use distancing_game::game::{alpha_bar, calibrate_from_peak, estimate_sensitivity, SensitivityProbe};
use distancing_game::{EpidemicState, GameContext, ModelParams};

fn main() -> distancing_game::Result<()> {
    let params = ModelParams::default();
    let early = EpidemicState::siqr(0.9431, 0.0356, 0.0168, 0.0045)?;

    // Forward: the voluntary level implied by the default d. Backward: d from that level.
    let ctx = GameContext::from_state(&early, 1.0, params.beta_d())?;
    let observed = alpha_bar(&ctx)?;
    let d = estimate_sensitivity(observed, &SensitivityProbe::from_state(&early, 1.0, params.beta))?;
    println!("activity {observed:.6} at the early state <-> d = {d:.3}");

    for level in [0.3, 0.5, 0.7, 0.9] {
        let d = estimate_sensitivity(level, &SensitivityProbe::from_state(&early, 1.0, params.beta))?;
        println!("observed activity {level:.1} -> d = {d:.3}");
    }

    let peak = EpidemicState::siqr(0.5885, 0.1233, 0.1656, 0.1226)?;
    println!(
        "d making the second state a prevalence peak: {:.3}",
        calibrate_from_peak(&peak, &params)?
    );
    Ok(())
}
