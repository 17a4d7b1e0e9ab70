//! Epidemic dynamics under a social distancing policy that individuals may
//! choose not to follow.
//!
//! Each day the population plays a distancing game against the policy
//! `(α̃, c)`: an activity cap and a penalty for exceeding it. The resulting
//! Nash equilibrium activity levels drive an SIQR model for one day, and the
//! loop repeats.
//!
//! * [`model`]: compartments, transmission, RK4 integration.
//! * [`game`]: utilities, best responses, the four equilibrium regimes.
//! * [`simulator`]: the daily game/dynamics loop.
//! * [`metrics`]: total infections, peaks, policy efficiency.
//! * [`experiments`]: JSON configs, parameter sweeps, equilibrium maps, CSV export.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod game;
pub mod metrics;
pub mod model;
pub mod simulator;

pub use error::{Error, Result};
pub use game::{Case, Equilibrium, GameContext, Policy, SiStrategy};
pub use metrics::OutcomeSummary;
pub use model::{ActivityProfile, EpidemicState, ModelParams};
pub use simulator::{PredictionMode, SimulationConfig, Trajectory};
