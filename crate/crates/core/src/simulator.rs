//! The daily closed loop: predict, play the game, integrate one day.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{solve_for_state, Equilibrium, Policy};
use crate::model::{advance, ActivityProfile, Dynamics, EpidemicState, ModelParams};

pub const DEFAULT_HORIZON: usize = 365;
pub const DEFAULT_I0: f64 = 1e-4;

/// How individuals anticipate the coming day's state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredictionMode {
    /// Today's state stands in for tomorrow's.
    #[default]
    CurrentState,
    /// Integrate one day ahead under yesterday's equilibrium (all-1 on day 0).
    OneStepLookahead,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub initial_state: EpidemicState,
    pub params: ModelParams,
    /// Held fixed over the whole horizon.
    pub policy: Policy,
    pub horizon: usize,
    pub prediction_mode: PredictionMode,
    pub reinfection_enabled: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            initial_state: EpidemicState::seeded(DEFAULT_I0).expect("valid seed"),
            params: ModelParams::default(),
            policy: Policy::none(),
            horizon: DEFAULT_HORIZON,
            prediction_mode: PredictionMode::CurrentState,
            reinfection_enabled: false,
        }
    }
}

impl SimulationConfig {
    pub fn with_policy(mut self, policy: Policy) -> Self {
        self.policy = policy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon < 1 {
            return Err(Error::domain("horizon must be at least one day"));
        }
        self.initial_state.validate()?;
        self.params.validate()?;
        self.policy.validate()?;
        if !self.reinfection_enabled && self.initial_state.reinfected != 0.0 {
            return Err(Error::domain(
                "reinfected compartment is nonzero but reinfection is disabled",
            ));
        }
        Ok(())
    }

    pub fn dynamics(&self) -> Dynamics {
        if self.reinfection_enabled {
            Dynamics::Reinfection
        } else {
            Dynamics::Base
        }
    }
}

/// One recorded day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DayRecord {
    pub day: usize,
    /// State at the start of the day.
    pub state: EpidemicState,
    pub equilibrium: Equilibrium,
    /// Population-mean activity over the mixing compartments.
    pub theta: f64,
    /// Cumulative susceptible-to-infected flow up to the start of the day.
    pub cumulative_infections: f64,
    /// Cumulative recovered-to-reinfected flow up to the start of the day.
    pub cumulative_reinfections: f64,
}

impl DayRecord {
    pub fn activities(&self) -> ActivityProfile {
        self.equilibrium
            .activities()
            .expect("recorded equilibria carry valid activity levels")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub policy: Policy,
    pub records: Vec<DayRecord>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn first(&self) -> Option<&DayRecord> {
        self.records.first()
    }

    pub fn last(&self) -> Option<&DayRecord> {
        self.records.last()
    }

    pub fn prevalence(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.state.i).collect()
    }

    pub fn theta(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.theta).collect()
    }

    /// Days spent in each equilibrium regime, indexed by case number minus one.
    pub fn case_histogram(&self) -> [usize; 4] {
        let mut h = [0; 4];
        for r in &self.records {
            h[usize::from(r.equilibrium.case.number() - 1)] += 1;
        }
        h
    }
}

/// The state individuals plan against.
pub fn predict_state(
    state: &EpidemicState,
    prev_equilibrium: Option<&Equilibrium>,
    params: &ModelParams,
    dynamics: Dynamics,
    mode: PredictionMode,
) -> Result<EpidemicState> {
    match mode {
        PredictionMode::CurrentState => Ok(*state),
        PredictionMode::OneStepLookahead => {
            let activities = match prev_equilibrium {
                Some(eq) => eq.activities()?,
                None => ActivityProfile::full(),
            };
            Ok(advance(state, &activities, params, dynamics, 1.0)?.state)
        }
    }
}

/// Run the closed loop for `horizon` days, recording `horizon + 1` days.
pub fn simulate(config: &SimulationConfig) -> Result<Trajectory> {
    config.validate()?;
    let dynamics = config.dynamics();
    let params = &config.params;
    let policy = &config.policy;

    let mut records = Vec::with_capacity(config.horizon + 1);
    let mut state = config.initial_state;
    let mut prev: Option<Equilibrium> = None;
    let (mut cum_inf, mut cum_reinf) = (0.0, 0.0);

    for day in 0..=config.horizon {
        let at_day = |e: Error| Error::Simulation {
            day,
            source: Box::new(e),
        };
        let predicted =
            predict_state(&state, prev.as_ref(), params, dynamics, config.prediction_mode).map_err(at_day)?;
        let equilibrium = solve_for_state(&predicted, params, policy).map_err(at_day)?;
        let activities = equilibrium.activities().map_err(at_day)?;
        records.push(DayRecord {
            day,
            state,
            equilibrium,
            theta: activities.mean_activity(&state),
            cumulative_infections: cum_inf,
            cumulative_reinfections: cum_reinf,
        });
        if day == config.horizon {
            break;
        }
        let out = advance(&state, &activities, params, dynamics, 1.0).map_err(at_day)?;
        cum_inf += out.new_infections;
        cum_reinf += out.new_reinfections;
        state = out.state;
        prev = Some(equilibrium);
    }

    Ok(Trajectory {
        policy: *policy,
        records,
    })
}

/// [`simulate`] with the recovered group's penalty taken from `recovered_override`.
pub fn simulate_segmented(config: &SimulationConfig, recovered_override: &Policy) -> Result<Trajectory> {
    let policy = config.policy.with_c_recovered(recovered_override.c_recovered)?;
    simulate(&config.with_policy(policy))
}
