//! Compartmental dynamics.
//!
//! Susceptible, infected (unaware, still mixing), quarantined (isolated) and
//! recovered fractions, with the transmission term scaled by each group's
//! activity level. Quarantined individuals never enter the mixing pool.
//!
//! The reinfection extension adds a fifth compartment: recovered individuals
//! who caught the disease again. They do not know it, so they keep the
//! recovered group's activity level while transmitting like the infected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `s + i + q + r + reinfected = 1`.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Excursions outside `[0, 1]` up to this size are treated as round-off and clamped.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// Internal RK4 step length in days.
pub const DEFAULT_SUBSTEP: f64 = 0.1;

/// Compartment fractions at time `t` (days).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpidemicState {
    pub s: f64,
    pub i: f64,
    pub q: f64,
    pub r: f64,
    #[serde(default)]
    pub reinfected: f64,
    #[serde(default)]
    pub t: f64,
}

impl EpidemicState {
    pub fn new(s: f64, i: f64, q: f64, r: f64, reinfected: f64, t: f64) -> Result<Self> {
        let state = Self {
            s,
            i,
            q,
            r,
            reinfected,
            t,
        };
        state.validate()?;
        Ok(state)
    }

    /// Base-model state `(s, i, q, r)` at `t = 0`.
    pub fn siqr(s: f64, i: f64, q: f64, r: f64) -> Result<Self> {
        Self::new(s, i, q, r, 0.0, 0.0)
    }

    /// Fully susceptible population seeded with `i0` infected.
    pub fn seeded(i0: f64) -> Result<Self> {
        Self::new(1.0 - i0, i0, 0.0, 0.0, 0.0, 0.0)
    }

    pub fn total(&self) -> f64 {
        self.s + self.i + self.q + self.r + self.reinfected
    }

    /// Fraction of the population that is currently infectious.
    pub fn infectious(&self) -> f64 {
        self.i + self.reinfected
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.named() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(format!("compartment {name} = {v} outside [0, 1]")));
            }
        }
        let total = self.total();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::domain(format!("compartments sum to {total}, expected 1")));
        }
        if !self.t.is_finite() {
            return Err(Error::domain("non-finite time"));
        }
        Ok(())
    }

    fn named(&self) -> [(&'static str, f64); 5] {
        [
            ("s", self.s),
            ("i", self.i),
            ("q", self.q),
            ("r", self.r),
            ("reinfected", self.reinfected),
        ]
    }

    fn to_array(self) -> [f64; 5] {
        [self.s, self.i, self.q, self.r, self.reinfected]
    }
}

/// Epidemic and behavioural constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelParams {
    /// Transmission rate per day: nominal contact rate times per-contact infection probability.
    pub beta: f64,
    /// Infected to quarantined rate per day.
    pub gamma1: f64,
    /// Quarantined to recovered rate per day.
    pub gamma2: f64,
    /// Sensitivity to infection probability, in utility units.
    pub d: f64,
    /// Reinfection transmission scale relative to a susceptible contact.
    pub phi: f64,
}

impl Default for ModelParams {
    /// COVID-19 calibration: `R0 = 3.1`, seven-day incubation, fourteen-day quarantine.
    fn default() -> Self {
        Self {
            beta: 3.1 / 7.0,
            gamma1: 1.0 / 7.0,
            gamma2: 1.0 / 14.0,
            d: 1858.0,
            phi: 0.0,
        }
    }
}

impl ModelParams {
    pub fn new(beta: f64, gamma1: f64, gamma2: f64, d: f64, phi: f64) -> Result<Self> {
        let params = Self {
            beta,
            gamma1,
            gamma2,
            d,
            phi,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        // beta = 0 is allowed: it is the no-transmission limit used by several checks.
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return Err(Error::domain(format!("beta = {} must be finite and >= 0", self.beta)));
        }
        if !(self.gamma1 > 0.0) || !(self.gamma2 > 0.0) {
            return Err(Error::domain("gamma1 and gamma2 must be > 0"));
        }
        if !(self.d >= 0.0) || !self.d.is_finite() {
            return Err(Error::domain(format!("d = {} must be finite and >= 0", self.d)));
        }
        if !(0.0..=1.0).contains(&self.phi) {
            return Err(Error::domain(format!("phi = {} outside [0, 1]", self.phi)));
        }
        Ok(())
    }

    pub fn with_d(mut self, d: f64) -> Self {
        self.d = d;
        self
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    /// Basic reproduction number `beta / gamma1`.
    pub fn r0(&self) -> f64 {
        self.beta / self.gamma1
    }

    /// Risk coefficient of the distancing game.
    pub fn beta_d(&self) -> f64 {
        self.beta * self.d
    }
}

/// Per-group activity levels in `(0, 1]`.
///
/// Infected individuals do not know they are infected and act like the
/// susceptible; reinfected individuals likewise act like the recovered. The
/// constructor enforces both identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActivityProfile {
    pub alpha_s: f64,
    pub alpha_i: f64,
    pub alpha_r: f64,
    pub alpha_reinfected: f64,
}

impl ActivityProfile {
    pub fn new(alpha_si: f64, alpha_r: f64) -> Result<Self> {
        for (name, v) in [("alpha_si", alpha_si), ("alpha_r", alpha_r)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::domain(format!("{name} = {v} outside (0, 1]")));
            }
        }
        Ok(Self {
            alpha_s: alpha_si,
            alpha_i: alpha_si,
            alpha_r,
            alpha_reinfected: alpha_r,
        })
    }

    /// Everyone at normal activity.
    pub fn full() -> Self {
        Self {
            alpha_s: 1.0,
            alpha_i: 1.0,
            alpha_r: 1.0,
            alpha_reinfected: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.alpha_s, self.alpha_i, self.alpha_r, self.alpha_reinfected] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::domain(format!("activity level {v} outside (0, 1]")));
            }
        }
        if self.alpha_s != self.alpha_i || self.alpha_r != self.alpha_reinfected {
            return Err(Error::domain(
                "infected must match susceptible and reinfected must match recovered activity",
            ));
        }
        Ok(())
    }

    /// Population-mean activity for a state.
    pub fn mean_activity(&self, state: &EpidemicState) -> f64 {
        self.alpha_s * state.s
            + self.alpha_i * state.i
            + self.alpha_r * state.r
            + self.alpha_reinfected * state.reinfected
    }
}

/// Per-day rates of change, one per compartment.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateDelta {
    pub ds: f64,
    pub di: f64,
    pub dq: f64,
    pub dr: f64,
    pub dreinfected: f64,
}

impl StateDelta {
    pub fn sum(&self) -> f64 {
        self.ds + self.di + self.dq + self.dr + self.dreinfected
    }

    fn from_array(a: [f64; 5]) -> Self {
        Self {
            ds: a[0],
            di: a[1],
            dq: a[2],
            dr: a[3],
            dreinfected: a[4],
        }
    }
}

/// Which right-hand side to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dynamics {
    #[default]
    Base,
    Reinfection,
}

/// New-infection flow `-ds/dt` under the given activity levels.
pub fn transmission_force(state: &EpidemicState, activities: &ActivityProfile, params: &ModelParams) -> Result<f64> {
    state.validate()?;
    activities.validate()?;
    base_force(&state.to_array(), activities, params.beta)
}

/// Right-hand side of the activity-adjusted SIQR system. The reinfected
/// compartment is inert.
pub fn derivatives(state: &EpidemicState, activities: &ActivityProfile, params: &ModelParams) -> Result<StateDelta> {
    state.validate()?;
    activities.validate()?;
    base_rhs(&state.to_array(), activities, params).map(StateDelta::from_array)
}

/// Right-hand side with recovered-to-reinfected transitions.
///
/// Infectious pool `alpha_i i + alpha_reinfected reinfected`, mixing pool
/// `alpha_s s + alpha_i i + alpha_r r + alpha_reinfected reinfected`. The
/// recovered are reinfected at `phi` times the susceptible rate; reinfected
/// individuals are quarantined at `gamma1` like first-time infections.
pub fn reinfection_derivatives(
    state: &EpidemicState,
    activities: &ActivityProfile,
    params: &ModelParams,
) -> Result<StateDelta> {
    state.validate()?;
    activities.validate()?;
    reinfection_rhs(&state.to_array(), activities, params).map(|(d, _)| StateDelta::from_array(d))
}

/// Result of advancing the state over one interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub state: EpidemicState,
    /// Integral of the susceptible-to-infected flow over the interval.
    pub new_infections: f64,
    /// Integral of the recovered-to-reinfected flow over the interval.
    pub new_reinfections: f64,
}

/// Advance the base model by `dt` days with RK4 (substeps of at most 0.1 day).
pub fn step(
    state: &EpidemicState,
    activities: &ActivityProfile,
    params: &ModelParams,
    dt: f64,
) -> Result<EpidemicState> {
    advance(state, activities, params, Dynamics::Base, dt).map(|o| o.state)
}

/// Advance the reinfection model by `dt` days.
pub fn step_reinfection(
    state: &EpidemicState,
    activities: &ActivityProfile,
    params: &ModelParams,
    dt: f64,
) -> Result<EpidemicState> {
    advance(state, activities, params, Dynamics::Reinfection, dt).map(|o| o.state)
}

/// Advance with activities held constant, also integrating the infection flows.
pub fn advance(
    state: &EpidemicState,
    activities: &ActivityProfile,
    params: &ModelParams,
    dynamics: Dynamics,
    dt: f64,
) -> Result<StepOutcome> {
    advance_with_substep(state, activities, params, dynamics, dt, DEFAULT_SUBSTEP)
}

/// [`advance`] with an explicit upper bound on the RK4 step length.
pub fn advance_with_substep(
    state: &EpidemicState,
    activities: &ActivityProfile,
    params: &ModelParams,
    dynamics: Dynamics,
    dt: f64,
    max_substep: f64,
) -> Result<StepOutcome> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::domain(format!("dt = {dt} must be positive")));
    }
    if !(max_substep > 0.0) {
        return Err(Error::domain("substep must be positive"));
    }
    state.validate()?;
    activities.validate()?;

    let n = (dt / max_substep - 1e-9).ceil().max(1.0) as usize;
    let h = dt / n as f64;

    // Five compartments followed by the two cumulative flows.
    let names = ["s", "i", "q", "r", "reinfected"];
    let rhs = |y: &[f64; 7]| -> Result<[f64; 7]> {
        let x = [y[0], y[1], y[2], y[3], y[4]];
        // A stage far outside the simplex means the step is too long for the rates.
        if let Some(k) = (0..5).find(|&k| !(x[k] >= -CLAMP_TOLERANCE)) {
            return Err(Error::Integration {
                t: state.t,
                compartment: names[k],
                value: x[k],
            });
        }
        let (d, force, reinf) = match dynamics {
            Dynamics::Base => {
                let d = base_rhs(&x, activities, params)?;
                (d, -d[0], 0.0)
            }
            Dynamics::Reinfection => {
                let (d, reinf) = reinfection_rhs(&x, activities, params)?;
                (d, -d[0], reinf)
            }
        };
        Ok([d[0], d[1], d[2], d[3], d[4], force, reinf])
    };

    let mut y = [0.0; 7];
    y[..5].copy_from_slice(&state.to_array());
    for _ in 0..n {
        y = rk4(&y, h, &rhs)?;
    }

    let t = state.t + dt;
    let mut x = [0.0; 5];
    for k in 0..5 {
        x[k] = clamp_unit(y[k], names[k], t)?;
    }
    Ok(StepOutcome {
        state: EpidemicState {
            s: x[0],
            i: x[1],
            q: x[2],
            r: x[3],
            reinfected: x[4],
            t,
        },
        new_infections: y[5],
        new_reinfections: y[6],
    })
}

fn clamp_unit(v: f64, compartment: &'static str, t: f64) -> Result<f64> {
    if (-CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&v) {
        Ok(v.clamp(0.0, 1.0))
    } else {
        Err(Error::Integration {
            t,
            compartment,
            value: v,
        })
    }
}

fn rk4<const N: usize>(y: &[f64; N], h: f64, f: &impl Fn(&[f64; N]) -> Result<[f64; N]>) -> Result<[f64; N]> {
    let offset = |base: &[f64; N], k: &[f64; N], scale: f64| {
        let mut out = *base;
        for (o, kv) in out.iter_mut().zip(k) {
            *o += scale * kv;
        }
        out
    };
    let k1 = f(y)?;
    let k2 = f(&offset(y, &k1, h / 2.0))?;
    let k3 = f(&offset(y, &k2, h / 2.0))?;
    let k4 = f(&offset(y, &k3, h))?;
    let mut out = *y;
    for j in 0..N {
        out[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    Ok(out)
}

fn base_force(x: &[f64; 5], a: &ActivityProfile, beta: f64) -> Result<f64> {
    let (s, i, r) = (x[0], x[1], x[3]);
    let pool = a.alpha_s * s + a.alpha_i * i + a.alpha_r * r;
    if !(pool > 0.0) {
        return Err(Error::domain("empty mixing pool"));
    }
    Ok(beta * (a.alpha_s * s) * (a.alpha_i * i) / pool)
}

fn base_rhs(x: &[f64; 5], a: &ActivityProfile, p: &ModelParams) -> Result<[f64; 5]> {
    let force = base_force(x, a, p.beta)?;
    let (i, q) = (x[1], x[2]);
    Ok([
        -force,
        force - p.gamma1 * i,
        p.gamma1 * i - p.gamma2 * q,
        p.gamma2 * q,
        0.0,
    ])
}

/// Returns the derivatives and the reinfection inflow.
fn reinfection_rhs(x: &[f64; 5], a: &ActivityProfile, p: &ModelParams) -> Result<([f64; 5], f64)> {
    let [s, i, q, r, j] = *x;
    let pool = a.alpha_s * s + a.alpha_i * i + a.alpha_r * r + a.alpha_reinfected * j;
    if !(pool > 0.0) {
        return Err(Error::domain("empty mixing pool"));
    }
    let infectious = a.alpha_i * i + a.alpha_reinfected * j;
    let force = p.beta * (a.alpha_s * s) * infectious / pool;
    let reinf = p.beta * p.phi * (a.alpha_r * r) * infectious / pool;
    Ok((
        [
            -force,
            force - p.gamma1 * i,
            p.gamma1 * (i + j) - p.gamma2 * q,
            p.gamma2 * q - reinf,
            reinf - p.gamma1 * j,
        ],
        reinf,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn table2() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn no_infected_means_no_force() {
        let s = EpidemicState::siqr(0.7, 0.0, 0.1, 0.2).unwrap();
        let a = ActivityProfile::new(0.3, 0.9).unwrap();
        assert_eq!(transmission_force(&s, &a, &table2()).unwrap(), 0.0);
    }

    #[test]
    fn full_activity_reduces_to_unadjusted_term() {
        let p = table2();
        let s = EpidemicState::siqr(0.9, 0.1, 0.0, 0.0).unwrap();
        let f = transmission_force(&s, &ActivityProfile::full(), &p).unwrap();
        assert_relative_eq!(f, p.beta * 0.9 * 0.1 / 1.0, max_relative = 1e-15);
    }

    #[test]
    fn force_at_peak_state_by_hand() {
        // (s, i, r) = (0.5885, 0.1233, 0.1226), alpha_si = 0.5, alpha_r = 1:
        // pool = 0.5 * 0.7118 + 0.1226 = 0.4785
        // F = (3.1/7) * (0.29425 * 0.06165) / 0.4785
        let s = EpidemicState::siqr(0.5885, 0.1233, 0.1656, 0.1226).unwrap();
        let a = ActivityProfile::new(0.5, 1.0).unwrap();
        let expected = (3.1 / 7.0) * (0.29425 * 0.06165) / 0.4785;
        let f = transmission_force(&s, &a, &table2()).unwrap();
        assert_relative_eq!(f, expected, max_relative = 1e-12);
        assert_relative_eq!(f, 0.016_789_25, max_relative = 1e-6);
    }

    #[test]
    fn empty_pool_is_a_domain_error() {
        let s = EpidemicState::siqr(0.0, 0.0, 1.0, 0.0).unwrap();
        let err = transmission_force(&s, &ActivityProfile::full(), &table2()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn zero_infected_only_quarantine_outflow() {
        let p = table2();
        let s = EpidemicState::siqr(0.6, 0.0, 0.3, 0.1).unwrap();
        let d = derivatives(&s, &ActivityProfile::full(), &p).unwrap();
        assert_eq!(d.ds, 0.0);
        assert_eq!(d.di, 0.0);
        assert_relative_eq!(d.dq, -p.gamma2 * 0.3);
        assert_relative_eq!(d.dr, p.gamma2 * 0.3);
        assert_eq!(d.dreinfected, 0.0);
    }

    #[test]
    fn reinfection_collapses_at_phi_zero() {
        let p = table2();
        let s = EpidemicState::siqr(0.5, 0.1, 0.2, 0.2).unwrap();
        let a = ActivityProfile::new(0.4, 0.8).unwrap();
        let base = derivatives(&s, &a, &p).unwrap();
        let ext = reinfection_derivatives(&s, &a, &p).unwrap();
        assert_relative_eq!(base.ds, ext.ds, max_relative = 1e-15);
        assert_relative_eq!(base.di, ext.di, max_relative = 1e-15);
        assert_relative_eq!(base.dq, ext.dq, max_relative = 1e-15);
        assert_relative_eq!(base.dr, ext.dr, max_relative = 1e-15);
        assert_eq!(ext.dreinfected, 0.0);
    }

    #[test]
    fn no_recovered_means_no_reinfection() {
        let p = table2().with_phi(0.7);
        let s = EpidemicState::new(0.8, 0.1, 0.05, 0.0, 0.05, 0.0).unwrap();
        let d = reinfection_derivatives(&s, &ActivityProfile::new(0.5, 1.0).unwrap(), &p).unwrap();
        // dr only receives the quarantine outflow, reinfected only drains.
        assert_relative_eq!(d.dr, p.gamma2 * 0.05);
        assert_relative_eq!(d.dreinfected, -p.gamma1 * 0.05);
    }

    #[test]
    fn reinfection_inflow_by_hand() {
        // phi = 0.2, alpha_si = 0.5, alpha_r = 1, state (0.6, 0.1, 0.1, 0.15, 0.05):
        // pool = 0.3 + 0.05 + 0.15 + 0.05 = 0.55, infectious = 0.05 + 0.05 = 0.1
        // inflow = beta * 0.2 * 0.15 * 0.1 / 0.55
        let p = table2().with_phi(0.2);
        let s = EpidemicState::new(0.6, 0.1, 0.1, 0.15, 0.05, 0.0).unwrap();
        let a = ActivityProfile::new(0.5, 1.0).unwrap();
        let d = reinfection_derivatives(&s, &a, &p).unwrap();
        let inflow = p.beta * 0.2 * 0.15 * 0.1 / 0.55;
        assert_relative_eq!(d.dreinfected, inflow - p.gamma1 * 0.05, max_relative = 1e-12);
        assert_relative_eq!(d.dr, p.gamma2 * 0.1 - inflow, max_relative = 1e-12);
        assert!(d.sum().abs() < 1e-15);
    }

    #[test]
    fn zero_beta_is_a_pure_outflow_chain() {
        let p = ModelParams::new(0.0, 1.0 / 7.0, 1.0 / 14.0, 0.0, 0.0).unwrap();
        let mut s = EpidemicState::siqr(0.8, 0.2, 0.0, 0.0).unwrap();
        for _ in 0..60 {
            let next = step(&s, &ActivityProfile::full(), &p, 1.0).unwrap();
            assert_eq!(next.s, 0.8);
            assert!(next.i < s.i);
            assert!(next.r >= s.r);
            s = next;
        }
        assert!(s.i < 0.2 * (-60.0_f64 / 7.0).exp() * 1.0001);
    }

    #[test]
    fn rejects_nonpositive_dt() {
        let s = EpidemicState::seeded(1e-4).unwrap();
        assert!(step(&s, &ActivityProfile::full(), &table2(), 0.0).is_err());
    }

    #[test]
    fn oversized_step_is_an_integration_error() {
        let p = ModelParams::new(50.0, 1.0 / 7.0, 1.0 / 14.0, 0.0, 0.0).unwrap();
        let s = EpidemicState::siqr(0.5, 0.5, 0.0, 0.0).unwrap();
        let err = advance_with_substep(&s, &ActivityProfile::full(), &p, Dynamics::Base, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::Integration { .. }), "{err}");
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(EpidemicState::new(0.5, 0.5, 0.1, 0.0, 0.0, 0.0).is_err());
        assert!(EpidemicState::new(-0.1, 1.1, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(ActivityProfile::new(0.0, 1.0).is_err());
        assert!(ModelParams::new(0.1, 0.0, 0.1, 1.0, 0.0).is_err());
        assert!(ModelParams::new(0.1, 0.1, 0.1, 1.0, 1.5).is_err());
        let mut a = ActivityProfile::full();
        a.alpha_i = 0.5;
        assert!(a.validate().is_err());
    }

    #[test]
    fn r0_from_table() {
        assert_relative_eq!(table2().r0(), 3.1, max_relative = 1e-14);
    }
}
