//! Brute-force best responses, used to check the case analysis.

use super::{g_star, utility_unchecked, GameContext, Policy};
use crate::error::{Error, Result};

pub const MIN_ORACLE_GRID: usize = 10_000;

/// Utility ties within this are all reported as maximizers.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    pub max_utility: f64,
    /// Every candidate within [`TIE_TOL`] of the maximum, ascending.
    pub maximizers: Vec<f64>,
}

impl BestResponse {
    /// Number of runs of maximizers separated by more than `gap`.
    ///
    /// Near the vertex the utility is flat to second order, so a fine grid
    /// returns several neighbouring points for one response.
    pub fn cluster_count(&self, gap: f64) -> usize {
        let mut count = 0;
        let mut prev: Option<f64> = None;
        for &a in &self.maximizers {
            if prev.is_none_or(|p| a - p > gap) {
                count += 1;
            }
            prev = Some(a);
        }
        count
    }

    /// True when every maximizer lies within `tol` of some point in `support`
    /// and every support point has a maximizer within `tol`.
    pub fn matches_support(&self, support: &[f64], tol: f64) -> bool {
        let near = |x: f64, set: &[f64]| set.iter().any(|&y| (x - y).abs() <= tol);
        self.maximizers.iter().all(|&m| near(m, support)) && support.iter().all(|&s| near(s, &self.maximizers))
    }
}

/// Exhaustive search over `{k / grid_n : k = 1..=grid_n}` plus the two
/// analytic candidates, the cap and the vertex `g*(alpha_minus)`.
pub fn best_response_oracle(
    alpha_minus: f64,
    ctx: &GameContext,
    policy: &Policy,
    grid_n: usize,
) -> Result<BestResponse> {
    if grid_n < MIN_ORACLE_GRID {
        return Err(Error::domain(format!("oracle grid {grid_n} below {MIN_ORACLE_GRID}")));
    }
    if !(alpha_minus > 0.0 && alpha_minus <= 1.0) {
        return Err(Error::domain(format!("others' activity {alpha_minus} outside (0, 1]")));
    }
    let mut candidates: Vec<f64> = (1..=grid_n).map(|k| k as f64 / grid_n as f64).collect();
    if policy.alpha_tilde > 0.0 {
        candidates.push(policy.alpha_tilde);
    }
    candidates.push(g_star(alpha_minus, ctx));

    let values: Vec<f64> = candidates
        .iter()
        .map(|&a| utility_unchecked(a, alpha_minus, ctx, policy))
        .collect();
    let max_utility = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut maximizers: Vec<f64> = candidates
        .iter()
        .zip(&values)
        .filter(|(_, &u)| u >= max_utility - TIE_TOL)
        .map(|(&a, _)| a)
        .collect();
    maximizers.sort_by(f64::total_cmp);
    maximizers.dedup();
    Ok(BestResponse {
        max_utility,
        maximizers,
    })
}
