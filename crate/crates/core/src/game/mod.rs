//! The per-day social distancing game.
//!
//! Recovered individuals face no infection risk and simply compare the
//! utility of complying with the mandate against full activity. Susceptible
//! and infected individuals (who cannot tell themselves apart) play a
//! symmetric game: each one's infection risk depends on the average activity
//! of the others. The utility is concave in one's own activity except for a
//! drop of size `c` just above the mandated cap, so every best response is
//! either the cap itself or the vertex `g*` of the smooth part.
//!
//! [`solve_equilibrium`] classifies the four equilibrium regimes:
//!
//! | case | condition | equilibrium |
//! |------|-----------|-------------|
//! | 1 | `ᾱ <= α̃` | pure `ᾱ` |
//! | 2 | `ᾱ > α̃`, `u(ᾱ,ᾱ) >= u(α̃,ᾱ)` | pure `ᾱ` (noncompliance) |
//! | 3 | `ᾱ > α̃`, `u(α̃,α̃) >= u(g*(α̃),α̃)` | pure `α̃` (compliance) |
//! | 4 | otherwise | mixed over `{α̃, g*(m)}` with mean `m` |
//!
//! The risk coefficient is the product `beta * d`; the contact rate and
//! per-contact probability never appear separately.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ActivityProfile, EpidemicState, ModelParams, MASS_TOLERANCE};

mod calibrate;
mod oracle;

pub use calibrate::{activity_at_peak, calibrate_from_peak, estimate_sensitivity, SensitivityProbe};
pub use oracle::{best_response_oracle, BestResponse, MIN_ORACLE_GRID};

/// Lower bracket offset above the cap for the mixed-equilibrium search.
pub const BRACKET_OFFSET: f64 = 1e-12;
/// Bisection stops once the bracket is narrower than this...
pub const BISECTION_X_TOL: f64 = 1e-12;
/// ...and the indifference residual is below this.
pub const RESIDUAL_TOL: f64 = 1e-10;
pub const MAX_BISECTION_ITERS: usize = 200;

/// A social distancing mandate: activity cap and noncompliance penalty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Policy {
    pub alpha_tilde: f64,
    pub c: f64,
    /// Penalty faced by the recovered group; equal to `c` unless segmented.
    pub c_recovered: f64,
}

impl Policy {
    pub fn new(alpha_tilde: f64, c: f64) -> Result<Self> {
        Self::segmented(alpha_tilde, c, c)
    }

    pub fn segmented(alpha_tilde: f64, c: f64, c_recovered: f64) -> Result<Self> {
        let p = Self {
            alpha_tilde,
            c,
            c_recovered,
        };
        p.validate()?;
        Ok(p)
    }

    /// `(α̃, c) = (1, 0)`.
    pub fn none() -> Self {
        Self {
            alpha_tilde: 1.0,
            c: 0.0,
            c_recovered: 0.0,
        }
    }

    pub fn with_c_recovered(self, c_recovered: f64) -> Result<Self> {
        Self::segmented(self.alpha_tilde, self.c, c_recovered)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha_tilde) {
            return Err(Error::domain(format!(
                "alpha_tilde = {} outside [0, 1]",
                self.alpha_tilde
            )));
        }
        for (name, v) in [("c", self.c), ("c_recovered", self.c_recovered)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        Ok(())
    }
}

/// Smooth part of the utility, `log a - a + 1`.
pub fn activity_utility(alpha: f64) -> f64 {
    alpha.ln() - alpha + 1.0
}

/// Optimal activity of a recovered individual.
///
/// The recovered utility is increasing on both sides of the cap, so only the
/// cap and full activity compete. A zero cap is never optimal.
pub fn recovered_best(policy: &Policy) -> f64 {
    let cap = policy.alpha_tilde;
    if cap > 0.0 && activity_utility(cap) > -policy.c_recovered {
        cap
    } else {
        1.0
    }
}

/// What a susceptible or infected individual anticipates for the coming day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameContext {
    pub s_hat: f64,
    pub i_hat: f64,
    pub q_hat: f64,
    pub r_hat: f64,
    pub alpha_r_star: f64,
    pub beta_d: f64,
}

impl GameContext {
    pub fn new(s_hat: f64, i_hat: f64, q_hat: f64, r_hat: f64, alpha_r_star: f64, beta_d: f64) -> Result<Self> {
        let ctx = Self {
            s_hat,
            i_hat,
            q_hat,
            r_hat,
            alpha_r_star,
            beta_d,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    /// Context for a predicted state.
    ///
    /// Reinfected individuals are unaware and mix at the recovered level, so
    /// they are counted with `r_hat`. Infection risk is driven by first-time
    /// infected only.
    pub fn from_state(state: &EpidemicState, alpha_r_star: f64, beta_d: f64) -> Result<Self> {
        Self::new(
            state.s,
            state.i,
            state.q,
            state.r + state.reinfected,
            alpha_r_star,
            beta_d,
        )
    }

    /// Context with the recovered level set by the policy.
    pub fn for_policy(state: &EpidemicState, params: &ModelParams, policy: &Policy) -> Result<Self> {
        Self::from_state(state, recovered_best(policy), params.beta_d())
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.s_hat, self.i_hat, self.q_hat, self.r_hat] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(format!("predicted fraction {v} outside [0, 1]")));
            }
        }
        let total = self.s_hat + self.i_hat + self.q_hat + self.r_hat;
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::domain(format!("predicted fractions sum to {total}")));
        }
        if !(self.alpha_r_star > 0.0 && self.alpha_r_star <= 1.0) {
            return Err(Error::domain("alpha_r_star outside (0, 1]"));
        }
        if !(self.beta_d >= 0.0) || !self.beta_d.is_finite() {
            return Err(Error::domain("beta_d must be finite and >= 0"));
        }
        if !(self.s_hat + self.i_hat > 0.0) {
            return Err(Error::domain("no susceptible or infected left; the game is degenerate"));
        }
        Ok(())
    }

    fn mixing(&self, alpha_minus: f64) -> f64 {
        alpha_minus * (self.s_hat + self.i_hat) + self.alpha_r_star * self.r_hat
    }

    /// Marginal infection cost per unit of own activity when others play `alpha_minus`.
    pub fn marginal_risk(&self, alpha_minus: f64) -> f64 {
        let infectious = alpha_minus * self.i_hat;
        if infectious == 0.0 {
            return 0.0;
        }
        self.beta_d * infectious / self.mixing(alpha_minus)
    }
}

/// Utility of playing `alpha_j` while everyone else in the group plays `alpha_minus`.
pub fn utility_si(alpha_j: f64, alpha_minus: f64, ctx: &GameContext, policy: &Policy) -> Result<f64> {
    if !(alpha_j > 0.0 && alpha_j <= 1.0) {
        return Err(Error::domain(format!("own activity {alpha_j} outside (0, 1]")));
    }
    if !(alpha_minus > 0.0 && alpha_minus <= 1.0) {
        return Err(Error::domain(format!("others' activity {alpha_minus} outside (0, 1]")));
    }
    Ok(utility_unchecked(alpha_j, alpha_minus, ctx, policy))
}

pub(crate) fn utility_unchecked(alpha_j: f64, alpha_minus: f64, ctx: &GameContext, policy: &Policy) -> f64 {
    let penalty = if alpha_j > policy.alpha_tilde { policy.c } else { 0.0 };
    activity_utility(alpha_j) - penalty - alpha_j * ctx.marginal_risk(alpha_minus)
}

/// Vertex of the smooth utility given the others' activity.
pub fn g_star(alpha_minus: f64, ctx: &GameContext) -> f64 {
    1.0 / (1.0 + ctx.marginal_risk(alpha_minus))
}

/// Voluntary distancing level: the fixed point `g*(ᾱ) = ᾱ`.
pub fn alpha_bar(ctx: &GameContext) -> Result<f64> {
    let a = ctx.s_hat + ctx.i_hat;
    if !(a > 0.0) {
        return Err(Error::domain("no susceptible or infected left; the game is degenerate"));
    }
    let rr = ctx.alpha_r_star * ctx.r_hat;
    // (a + bd i) x^2 - (a - rr) x - rr = 0, positive root.
    let k = a + ctx.beta_d * ctx.i_hat;
    let b = a - rr;
    let disc = (b * b + 4.0 * rr * k).sqrt();
    let root = if b >= 0.0 {
        (b + disc) / (2.0 * k)
    } else {
        2.0 * rr / (disc - b)
    };
    Ok(root.min(1.0))
}

/// Regime of the day's equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    /// The cap does not bind.
    Case1,
    /// The cap binds but is ignored.
    Case2,
    /// Full compliance.
    Case3,
    /// Partial compliance.
    Case4,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::Case1, Case::Case2, Case::Case3, Case::Case4];

    pub fn number(self) -> u8 {
        match self {
            Case::Case1 => 1,
            Case::Case2 => 2,
            Case::Case3 => 3,
            Case::Case4 => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<Case> {
        Case::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }
}

/// Strategy of the susceptible/infected group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SiStrategy {
    Pure(f64),
    /// Play `low` (the cap) with probability `p`, `high = g*(mean)` otherwise.
    Mixed {
        low: f64,
        high: f64,
        p: f64,
        mean: f64,
    },
}

impl SiStrategy {
    /// Expected activity level.
    pub fn mean(&self) -> f64 {
        match *self {
            SiStrategy::Pure(level) => level,
            SiStrategy::Mixed { mean, .. } => mean,
        }
    }

    /// Actions played with positive probability.
    pub fn support(&self) -> Vec<f64> {
        match *self {
            SiStrategy::Pure(level) => vec![level],
            SiStrategy::Mixed { low, high, .. } => vec![low, high],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub case: Case,
    /// Activity of the recovered group.
    pub recovered: f64,
    pub si_strategy: SiStrategy,
    /// Indifference residual of the mixed strategy; zero for pure strategies.
    pub residual: f64,
}

impl Equilibrium {
    /// Activity of the susceptible/infected group as fed to the dynamics.
    pub fn si_activity(&self) -> f64 {
        self.si_strategy.mean()
    }

    /// Probability of playing exactly the cap.
    pub fn compliance_probability(&self, policy: &Policy) -> f64 {
        match self.si_strategy {
            SiStrategy::Mixed { p, .. } => p,
            SiStrategy::Pure(level) if self.case == Case::Case3 && level == policy.alpha_tilde => 1.0,
            SiStrategy::Pure(_) => 0.0,
        }
    }

    pub fn activities(&self) -> Result<ActivityProfile> {
        ActivityProfile::new(self.si_activity(), self.recovered)
    }
}

/// Solution of the indifference condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedSolution {
    pub mean: f64,
    pub p: f64,
    pub high: f64,
    pub residual: f64,
}

/// Indifference gap `U(m) = u(α̃, m) - u(g*(m), m)`; nondecreasing wherever `g*(m) > α̃`.
pub fn indifference_gap(m: f64, ctx: &GameContext, policy: &Policy) -> f64 {
    utility_unchecked(policy.alpha_tilde, m, ctx, policy) - utility_unchecked(g_star(m, ctx), m, ctx, policy)
}

/// Mean activity and compliance probability of the mixed equilibrium.
///
/// Bisection on `U` over `(α̃, ᾱ]`. Errors when the bracket does not change
/// sign, which only happens if the context is not in case 4.
pub fn mixed_equilibrium(ctx: &GameContext, policy: &Policy) -> Result<MixedSolution> {
    let cap = policy.alpha_tilde;
    let bar = alpha_bar(ctx)?;
    let gap = |m: f64| indifference_gap(m, ctx, policy);

    let mut lo = cap + BRACKET_OFFSET;
    let mut hi = bar;
    if !(cap > 0.0 && lo < hi) {
        return Err(Error::Solver(format!("empty bracket ({lo}, {hi}]")));
    }
    let (g_lo, g_hi) = (gap(lo), gap(hi));
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::Solver(format!(
            "indifference gap does not change sign: U({lo}) = {g_lo:e}, U({hi}) = {g_hi:e}"
        )));
    }

    let mut best = (lo, g_lo);
    for _ in 0..MAX_BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        let g_mid = gap(mid);
        if g_mid.abs() < best.1.abs() {
            best = (mid, g_mid);
        }
        if g_mid == 0.0 || (hi - lo <= BISECTION_X_TOL && g_mid.abs() <= RESIDUAL_TOL) {
            best = (mid, g_mid);
            break;
        }
        if mid <= lo || mid >= hi {
            break;
        }
        if g_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let (mean, residual) = best;
    if residual.abs() > RESIDUAL_TOL {
        return Err(Error::Solver(format!("bisection stalled with residual {residual:e}")));
    }
    let high = g_star(mean, ctx);
    let p = (high - mean) / (high - cap);
    Ok(MixedSolution {
        mean,
        p,
        high,
        residual: residual.abs(),
    })
}

/// Equilibrium of the day's game.
///
/// The recovered level is taken from `ctx.alpha_r_star`; contexts built with
/// [`GameContext::for_policy`] set it to [`recovered_best`].
pub fn solve_equilibrium(ctx: &GameContext, policy: &Policy) -> Result<Equilibrium> {
    let cap = policy.alpha_tilde;
    let bar = alpha_bar(ctx)?;
    let pure = |case, level| Equilibrium {
        case,
        recovered: ctx.alpha_r_star,
        si_strategy: SiStrategy::Pure(level),
        residual: 0.0,
    };

    if bar <= cap {
        return Ok(pure(Case::Case1, bar));
    }
    // A zero cap is unreachable under log utility: the penalty is always paid.
    if cap <= 0.0 {
        return Ok(pure(Case::Case2, bar));
    }
    let u = |own: f64, others: f64| utility_unchecked(own, others, ctx, policy);
    if u(bar, bar) >= u(cap, bar) {
        return Ok(pure(Case::Case2, bar));
    }
    if u(cap, cap) >= u(g_star(cap, ctx), cap) {
        return Ok(pure(Case::Case3, cap));
    }
    let mixed = mixed_equilibrium(ctx, policy)?;
    Ok(Equilibrium {
        case: Case::Case4,
        recovered: ctx.alpha_r_star,
        si_strategy: SiStrategy::Mixed {
            low: cap,
            high: mixed.high,
            p: mixed.p,
            mean: mixed.mean,
        },
        residual: mixed.residual,
    })
}

/// Build the context for a state and solve it.
pub fn solve_for_state(state: &EpidemicState, params: &ModelParams, policy: &Policy) -> Result<Equilibrium> {
    solve_equilibrium(&GameContext::for_policy(state, params, policy)?, policy)
}
