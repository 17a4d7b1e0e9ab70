//! Policy grids run in parallel, one row per grid point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Policy;
use crate::metrics::{efficiency, OutcomeSummary};
use crate::simulator::{simulate, SimulationConfig, Trajectory};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub alpha_tilde: Vec<f64>,
    pub c: Vec<f64>,
    /// `None` runs only the φ of `base.params`. A grid turns reinfection on.
    pub phi: Option<Vec<f64>>,
    /// Adds a second row per point with this recovered penalty.
    pub segmented_c_recovered: Option<f64>,
    pub base: SimulationConfig,
}

impl SweepSpec {
    pub fn new(alpha_tilde: Vec<f64>, c: Vec<f64>, base: SimulationConfig) -> Self {
        Self {
            alpha_tilde,
            c,
            phi: None,
            segmented_c_recovered: None,
            base,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha_tilde.is_empty() || self.c.is_empty() {
            return Err(Error::domain("sweep grids must be nonempty"));
        }
        if let Some(phi) = &self.phi {
            if phi.is_empty() {
                return Err(Error::domain("phi grid must be nonempty"));
            }
            for &p in phi {
                self.base.params.with_phi(p).validate()?;
            }
        }
        for &a in &self.alpha_tilde {
            for &c in &self.c {
                Policy::segmented(a, c, self.segmented_c_recovered.unwrap_or(c))?;
            }
        }
        self.base.validate()
    }

    fn phis(&self) -> Vec<f64> {
        self.phi.clone().unwrap_or_else(|| vec![self.base.params.phi])
    }

    fn config_for_phi(&self, phi: f64) -> SimulationConfig {
        let mut cfg = self.base;
        cfg.params.phi = phi;
        if self.phi.is_some() {
            cfg.reinfection_enabled = true;
        }
        cfg
    }

    pub fn len(&self) -> usize {
        let variants = if self.segmented_c_recovered.is_some() { 2 } else { 1 };
        self.alpha_tilde.len() * self.c.len() * self.phis().len() * variants
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub alpha_tilde: f64,
    pub c: f64,
    pub phi: f64,
    pub segmented: bool,
    pub c_recovered: f64,
    /// `None` when the run failed; see `error`.
    pub outcome: Option<OutcomeSummary>,
    pub case_days: [usize; 4],
    pub error: Option<String>,
}

impl ResultRow {
    fn key(&self) -> (f64, f64, f64, bool) {
        (self.alpha_tilde, self.c, self.phi, self.segmented)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    /// Sorted by `(alpha_tilde, c, phi, segmented)`.
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn get(&self, alpha_tilde: f64, c: f64, phi: f64, segmented: bool) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.key() == (alpha_tilde, c, phi, segmented))
    }

    /// Rows at fixed `c`, `phi` and variant, in increasing α̃.
    pub fn slice_c(&self, c: f64, phi: f64, segmented: bool) -> Vec<&ResultRow> {
        self.rows
            .iter()
            .filter(|r| r.c == c && r.phi == phi && r.segmented == segmented)
            .collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &ResultRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    alpha_tilde: f64,
    c: f64,
    phi_index: usize,
    segmented: bool,
}

fn run_point(
    spec: &SweepSpec,
    phi: f64,
    baseline: &Result<Trajectory, String>,
    pt: Point,
) -> (ResultRow, Option<Trajectory>) {
    let c_recovered = match (pt.segmented, spec.segmented_c_recovered) {
        (true, Some(cr)) => cr,
        _ => pt.c,
    };
    let mut row = ResultRow {
        alpha_tilde: pt.alpha_tilde,
        c: pt.c,
        phi,
        segmented: pt.segmented,
        c_recovered,
        outcome: None,
        case_days: [0; 4],
        error: None,
    };
    let traj = Policy::segmented(pt.alpha_tilde, pt.c, c_recovered)
        .and_then(|p| simulate(&spec.config_for_phi(phi).with_policy(p)));
    let traj = match traj {
        Ok(t) => t,
        Err(e) => {
            row.error = Some(e.to_string());
            return (row, None);
        }
    };
    row.case_days = traj.case_histogram();
    match baseline {
        Ok(base) => match efficiency(&traj, base) {
            Ok(summary) => row.outcome = Some(summary),
            Err(e) => row.error = Some(e.to_string()),
        },
        Err(e) => row.error = Some(format!("baseline: {e}")),
    }
    (row, Some(traj))
}

fn sweep_inner(spec: &SweepSpec, keep: bool) -> Result<(ResultTable, Vec<Option<Trajectory>>)> {
    spec.validate()?;
    let phis = spec.phis();
    let baselines: Vec<Result<Trajectory, String>> = phis
        .par_iter()
        .map(|&phi| simulate(&spec.config_for_phi(phi).with_policy(Policy::none())).map_err(|e| e.to_string()))
        .collect();

    let variants: &[bool] = if spec.segmented_c_recovered.is_some() {
        &[false, true]
    } else {
        &[false]
    };
    let mut points = Vec::with_capacity(spec.len());
    for &alpha_tilde in &spec.alpha_tilde {
        for &c in &spec.c {
            for phi_index in 0..phis.len() {
                for &segmented in variants {
                    points.push(Point {
                        alpha_tilde,
                        c,
                        phi_index,
                        segmented,
                    });
                }
            }
        }
    }

    let mut out: Vec<(ResultRow, Option<Trajectory>)> = points
        .par_iter()
        .map(|&pt| {
            let (row, traj) = run_point(spec, phis[pt.phi_index], &baselines[pt.phi_index], pt);
            (row, if keep { traj } else { None })
        })
        .collect();
    out.sort_by(|a, b| a.0.key().partial_cmp(&b.0.key()).expect("grid values are finite"));
    let (rows, trajs) = out.into_iter().unzip();
    Ok((ResultTable { rows }, trajs))
}

/// Every grid point against its own no-policy baseline (one per φ).
///
/// A failing point records its error in-row; the sweep itself only fails on
/// an invalid spec.
pub fn run_sweep(spec: &SweepSpec) -> Result<ResultTable> {
    sweep_inner(spec, false).map(|(t, _)| t)
}

/// [`run_sweep`] that also returns each row's trajectory, aligned with the rows.
pub fn run_sweep_with_trajectories(spec: &SweepSpec) -> Result<(ResultTable, Vec<Option<Trajectory>>)> {
    sweep_inner(spec, true)
}

/// Efficiency against the penalty at a fixed cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyRow {
    pub c: f64,
    pub total_infections: f64,
    pub infection_reduction: f64,
    pub activity_loss: f64,
    pub efficiency: Option<f64>,
}

/// One row per penalty in `c_grid`, with the cap taken from `base.policy`.
pub fn efficiency_sweep(base: &SimulationConfig, c_grid: &[f64]) -> Result<Vec<EfficiencyRow>> {
    let spec = SweepSpec::new(vec![base.policy.alpha_tilde], c_grid.to_vec(), *base);
    let table = run_sweep(&spec)?;
    table
        .rows
        .iter()
        .map(|row| {
            let o = row.outcome.ok_or_else(|| {
                Error::Solver(format!(
                    "c = {}: {}",
                    row.c,
                    row.error.as_deref().unwrap_or("no outcome")
                ))
            })?;
            Ok(EfficiencyRow {
                c: row.c,
                total_infections: o.total_infections,
                infection_reduction: o.infection_reduction,
                activity_loss: o.activity_loss,
                efficiency: o.efficiency,
            })
        })
        .collect()
}
