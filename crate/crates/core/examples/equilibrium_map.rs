//! Which equilibrium regime holds across `(c, α̃)` at a fixed epidemic state.
//!
//! `d` is chosen so the given state is a no-policy prevalence peak; at the
//! default `d` the voluntary level is below almost every cap.
//!
//! ```text
//! cargo run --release --example equilibrium_map
//! ```

use distancing_game::experiments::{equilibrium_map, linspace_step};
use distancing_game::game::calibrate_from_peak;
use distancing_game::{EpidemicState, ModelParams};

fn main() -> distancing_game::Result<()> {
    let state = EpidemicState::siqr(0.5885, 0.1233, 0.1656, 0.1226)?;
    let d = calibrate_from_peak(&state, &ModelParams::default())?;
    let params = ModelParams::default().with_d(d);
    let map = equilibrium_map(
        &state,
        &linspace_step(0.02, 1.0, 0.02),
        &linspace_step(0.0, 1.0, 0.02),
        &params,
    )?;

    println!("d = {d:.3}; rows α̃ (top = 1), columns c from 0 to 1; digit = case");
    for a in (0..map.alpha_tilde.len()).rev().step_by(2) {
        let row: String = (0..map.c.len())
            .map(|k| char::from(b'0' + map.cell(a, k).case.number()))
            .collect();
        println!("{:.2} {row}", map.alpha_tilde[a]);
    }
    println!("grid lines contiguous: {}", map.lines_contiguous());
    Ok(())
}
