//! Outcome measures over trajectories.
//!
//! Total infections count everyone ever infected, `1 - s(T)`, plus every
//! reinfection when that extension is on. Efficiency compares a policy run
//! against the no-policy run `(α̃, c) = (1, 0)`: the relative reduction in
//! total infections divided by the relative loss of summed population-mean
//! activity over the full horizon.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Policy;
use crate::simulator::Trajectory;

/// Activity losses at or below this are treated as zero.
pub const ZERO_LOSS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeSummary {
    /// Total infections `Z` of the policy run.
    pub total_infections: f64,
    /// Relative reduction versus the baseline, `Ẑ`. Negative when the policy backfires.
    pub infection_reduction: f64,
    /// Relative loss of summed activity, `Θ̂`.
    pub activity_loss: f64,
    /// `Ẑ / Θ̂`; `None` when the policy costs no activity.
    pub efficiency: Option<f64>,
    pub peak_prevalence: f64,
    pub peak_day: usize,
}

pub fn total_infections(traj: &Trajectory) -> f64 {
    match traj.last() {
        Some(last) => 1.0 - last.state.s + last.cumulative_reinfections,
        None => 0.0,
    }
}

/// Maximum prevalence and the first day it is reached.
pub fn peak_stats(traj: &Trajectory) -> (f64, usize) {
    let mut best = (0.0, 0);
    for (k, r) in traj.records.iter().enumerate() {
        if k == 0 || r.state.i > best.0 {
            best = (r.state.i, r.day);
        }
    }
    best
}

/// Summary of a policy run against its no-policy baseline.
pub fn efficiency(traj_policy: &Trajectory, traj_baseline: &Trajectory) -> Result<OutcomeSummary> {
    if traj_baseline.policy != Policy::none() {
        return Err(Error::domain("baseline must be the (1, 0) no-policy run"));
    }
    if traj_policy.len() != traj_baseline.len() {
        return Err(Error::domain("trajectories cover different horizons"));
    }
    match (traj_policy.first(), traj_baseline.first()) {
        (Some(a), Some(b)) if a.state == b.state => {}
        (None, None) => {}
        _ => return Err(Error::domain("trajectories start from different states")),
    }

    let z = total_infections(traj_policy);
    let z_base = total_infections(traj_baseline);
    let infection_reduction = if z_base > 0.0 { (z_base - z) / z_base } else { 0.0 };

    let theta_base: f64 = traj_baseline.records.iter().map(|r| r.theta).sum();
    let theta_gap: f64 = traj_baseline
        .records
        .iter()
        .zip(&traj_policy.records)
        .map(|(b, p)| b.theta - p.theta)
        .sum();
    let activity_loss = if theta_base > 0.0 { theta_gap / theta_base } else { 0.0 };

    let efficiency = (activity_loss.abs() > ZERO_LOSS_TOL).then(|| infection_reduction / activity_loss);
    let (peak_prevalence, peak_day) = peak_stats(traj_policy);
    Ok(OutcomeSummary {
        total_infections: z,
        infection_reduction,
        activity_loss,
        efficiency,
        peak_prevalence,
        peak_day,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EpidemicState, ModelParams};
    use crate::simulator::{simulate, SimulationConfig};

    #[test]
    fn no_seed_no_infections() {
        let cfg = SimulationConfig {
            initial_state: EpidemicState::seeded(0.0).unwrap(),
            horizon: 50,
            ..Default::default()
        };
        let traj = simulate(&cfg).unwrap();
        assert_eq!(total_infections(&traj), 0.0);
        assert_eq!(peak_stats(&traj), (0.0, 0));
    }

    #[test]
    fn huge_transmission_infects_everyone() {
        let cfg = SimulationConfig {
            params: ModelParams::new(5.0, 1.0 / 7.0, 1.0 / 14.0, 0.0, 0.0).unwrap(),
            ..Default::default()
        };
        let z = total_infections(&simulate(&cfg).unwrap());
        assert!(z > 0.999_999, "z = {z}");
    }

    #[test]
    fn decaying_prevalence_peaks_on_day_zero() {
        let cfg = SimulationConfig {
            params: ModelParams::new(0.05, 1.0 / 7.0, 1.0 / 14.0, 0.0, 0.0).unwrap(),
            initial_state: EpidemicState::seeded(0.01).unwrap(),
            horizon: 100,
            ..Default::default()
        };
        let traj = simulate(&cfg).unwrap();
        assert_eq!(peak_stats(&traj), (0.01, 0));
    }

    #[test]
    fn baseline_against_itself_is_undefined() {
        let traj = simulate(&SimulationConfig::default()).unwrap();
        let summary = efficiency(&traj, &traj).unwrap();
        assert_eq!(summary.infection_reduction, 0.0);
        assert_eq!(summary.activity_loss, 0.0);
        assert_eq!(summary.efficiency, None);
    }

    #[test]
    fn identical_activity_lower_infections_is_undefined() {
        let base = simulate(&SimulationConfig::default()).unwrap();
        let mut fake = base.clone();
        fake.policy = Policy::new(0.5, 0.5).unwrap();
        let last = fake.records.last_mut().unwrap();
        last.state.s += 0.01;
        last.state.r -= 0.01;
        let summary = efficiency(&fake, &base).unwrap();
        assert!(summary.infection_reduction > 0.0);
        assert_eq!(summary.efficiency, None);
    }

    #[test]
    fn baseline_must_be_no_policy() {
        let cfg = SimulationConfig::default().with_policy(Policy::new(0.5, 0.5).unwrap());
        let traj = simulate(&cfg).unwrap();
        assert!(efficiency(&traj, &traj).is_err());
    }
}
