//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "params":        { "beta": 0.442857, "gamma1": 0.142857, "gamma2": 0.071429, "d": 1858, "phi": 0 },
//!   "initial_state": { "i": 1e-4 },
//!   "policy":        { "alpha_tilde": 0.4, "c": 0.4, "c_recovered": 0.1 },
//!   "simulation":    { "horizon": 365, "prediction_mode": "current-state", "reinfection": false },
//!   "sweep":         { "alpha_tilde": { "start": 0.05, "stop": 1.0, "step": 0.05 }, "c": [0.5, 0.8] },
//!   "output":        { "prevalence_panel": true }
//! }
//! ```
//!
//! Every section and field is optional; omitted values fall back to the
//! COVID-19 calibration and a no-policy run from `i0 = 1e-4`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::linspace_step;
use super::sweep::SweepSpec;
use crate::error::{Error, Result};
use crate::game::Policy;
use crate::model::{EpidemicState, ModelParams};
use crate::simulator::{PredictionMode, SimulationConfig, DEFAULT_HORIZON, DEFAULT_I0};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub params: ModelParams,
    pub initial_state: InitialStateConfig,
    pub policy: PolicyConfig,
    pub simulation: SimulationSection,
    pub sweep: Option<SweepSection>,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialStateConfig {
    /// Defaults to whatever is left after the other compartments.
    pub s: Option<f64>,
    pub i: f64,
    pub q: f64,
    pub r: f64,
    pub reinfected: f64,
}

impl Default for InitialStateConfig {
    fn default() -> Self {
        Self {
            s: None,
            i: DEFAULT_I0,
            q: 0.0,
            r: 0.0,
            reinfected: 0.0,
        }
    }
}

impl InitialStateConfig {
    pub fn to_state(&self) -> Result<EpidemicState> {
        let s = self.s.unwrap_or(1.0 - self.i - self.q - self.r - self.reinfected);
        EpidemicState::new(s, self.i, self.q, self.r, self.reinfected, 0.0)
            .map_err(|e| Error::Config(format!("initial_state: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyConfig {
    pub alpha_tilde: f64,
    pub c: f64,
    pub c_recovered: Option<f64>,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        Self {
            alpha_tilde: 1.0,
            c: 0.0,
            c_recovered: None,
        }
    }
}

impl PolicyConfig {
    pub fn to_policy(&self) -> Result<Policy> {
        Policy::segmented(self.alpha_tilde, self.c, self.c_recovered.unwrap_or(self.c))
            .map_err(|e| Error::Config(format!("policy: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSection {
    pub horizon: usize,
    pub prediction_mode: PredictionMode,
    pub reinfection: bool,
}

impl Default for SimulationSection {
    fn default() -> Self {
        Self {
            horizon: DEFAULT_HORIZON,
            prediction_mode: PredictionMode::CurrentState,
            reinfection: false,
        }
    }
}

/// Either an explicit list or an inclusive `start..=stop` range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridSpec::List(v) => v.clone(),
            GridSpec::Range { start, stop, step } => linspace_step(*start, *stop, *step),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub alpha_tilde: GridSpec,
    pub c: GridSpec,
    #[serde(default)]
    pub phi: Option<GridSpec>,
    /// When set, every grid point is also run with this recovered penalty.
    #[serde(default)]
    pub segmented_c_recovered: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    /// Used when no `--out` is given on the command line.
    pub dir: Option<String>,
    /// Also write one prevalence column per sweep point.
    pub prevalence_panel: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn simulation_config(&self) -> Result<SimulationConfig> {
        let cfg = SimulationConfig {
            initial_state: self.initial_state.to_state()?,
            params: self.params,
            policy: self.policy.to_policy()?,
            horizon: self.simulation.horizon,
            prediction_mode: self.simulation.prediction_mode,
            reinfection_enabled: self.simulation.reinfection,
        };
        cfg.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let section = self
            .sweep
            .as_ref()
            .ok_or_else(|| Error::Config("missing `sweep` section".into()))?;
        let spec = SweepSpec {
            alpha_tilde: section.alpha_tilde.values(),
            c: section.c.values(),
            phi: section.phi.as_ref().map(GridSpec::values),
            segmented_c_recovered: section.segmented_c_recovered,
            base: self.simulation_config()?,
        };
        spec.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(spec)
    }
}
