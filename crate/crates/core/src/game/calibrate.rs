//! Recovering the infection sensitivity `d` from observed activity.
//!
//! With no policy in force the observed activity of the susceptible/infected
//! group is the voluntary level, a fixed point of `g*`. That condition is
//! linear in `d`, so it inverts in closed form.

use crate::error::{Error, Result};
use crate::model::{EpidemicState, ModelParams};

/// Everything the fixed-point condition needs except `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityProbe {
    pub s_hat: f64,
    pub i_hat: f64,
    pub q_hat: f64,
    pub r_hat: f64,
    pub alpha_r_star: f64,
    pub beta: f64,
}

impl SensitivityProbe {
    pub fn from_state(state: &EpidemicState, alpha_r_star: f64, beta: f64) -> Self {
        Self {
            s_hat: state.s,
            i_hat: state.i,
            q_hat: state.q,
            r_hat: state.r + state.reinfected,
            alpha_r_star,
            beta,
        }
    }
}

/// `d` such that the voluntary level at the probe's state equals `observed`.
pub fn estimate_sensitivity(observed: f64, probe: &SensitivityProbe) -> Result<f64> {
    if !(observed > 0.0 && observed < 1.0) {
        return Err(Error::domain(format!(
            "observed activity {observed} must lie in (0, 1) for a finite sensitivity"
        )));
    }
    if !(probe.i_hat > 0.0) {
        return Err(Error::domain(
            "no infection in the probe state; sensitivity is unidentified",
        ));
    }
    if !(probe.beta > 0.0) {
        return Err(Error::domain("beta must be positive"));
    }
    let mixing = observed * (probe.s_hat + probe.i_hat) + probe.alpha_r_star * probe.r_hat;
    // g*(a) = a  <=>  mixing (1 - a) = beta d a^2 i
    Ok(mixing * (1.0 - observed) / (probe.beta * observed * observed * probe.i_hat))
}

/// Susceptible/infected activity that makes `state` a prevalence peak.
///
/// Solves `di/dt = 0` for the common activity `a` of the susceptible and
/// infected, with the recovered at `alpha_r`.
pub fn activity_at_peak(state: &EpidemicState, params: &ModelParams, alpha_r: f64) -> Result<f64> {
    let si = state.s + state.i;
    let rr = alpha_r * (state.r + state.reinfected);
    if !(state.s > 0.0 && state.i > 0.0 && params.beta > 0.0) {
        return Err(Error::domain("peak condition needs s, i and beta positive"));
    }
    // beta s a^2 = gamma1 (a si + rr)
    let k = params.gamma1 / params.beta;
    let a = (k * si + (k * k * si * si + 4.0 * state.s * k * rr).sqrt()) / (2.0 * state.s);
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain(format!("state cannot be a peak: required activity {a}")));
    }
    Ok(a)
}

/// Sensitivity under which a no-policy run peaks at `state`.
pub fn calibrate_from_peak(state: &EpidemicState, params: &ModelParams) -> Result<f64> {
    let alpha = activity_at_peak(state, params, 1.0)?;
    estimate_sensitivity(alpha, &SensitivityProbe::from_state(state, 1.0, params.beta))
}
