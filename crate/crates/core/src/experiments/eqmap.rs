//! Equilibrium regime over a `(c, α̃)` grid at a fixed state.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{solve_for_state, Case, Policy};
use crate::model::{EpidemicState, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapCell {
    pub alpha_tilde: f64,
    pub c: f64,
    pub case: Case,
    pub alpha_si: f64,
    pub alpha_r: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumMap {
    pub state: EpidemicState,
    pub alpha_tilde: Vec<f64>,
    pub c: Vec<f64>,
    /// Row-major: `cells[a * c.len() + k]` is `(alpha_tilde[a], c[k])`.
    pub cells: Vec<MapCell>,
}

pub fn equilibrium_map(
    state: &EpidemicState,
    alpha_tilde: &[f64],
    c: &[f64],
    params: &ModelParams,
) -> Result<EquilibriumMap> {
    if alpha_tilde.is_empty() || c.is_empty() {
        return Err(Error::domain("map grids must be nonempty"));
    }
    let points: Vec<(f64, f64)> = alpha_tilde
        .iter()
        .flat_map(|&a| c.iter().map(move |&k| (a, k)))
        .collect();
    let cells = points
        .par_iter()
        .map(|&(a, k)| {
            let policy = Policy::new(a, k)?;
            let eq = solve_for_state(state, params, &policy)?;
            Ok(MapCell {
                alpha_tilde: a,
                c: k,
                case: eq.case,
                alpha_si: eq.si_activity(),
                alpha_r: eq.recovered,
                p: eq.compliance_probability(&policy),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EquilibriumMap {
        state: *state,
        alpha_tilde: alpha_tilde.to_vec(),
        c: c.to_vec(),
        cells,
    })
}

impl EquilibriumMap {
    pub fn cell(&self, a: usize, k: usize) -> &MapCell {
        &self.cells[a * self.c.len() + k]
    }

    pub fn cases_present(&self) -> Vec<Case> {
        Case::ALL
            .into_iter()
            .filter(|case| self.cells.iter().any(|cell| cell.case == *case))
            .collect()
    }

    pub fn count(&self, case: Case) -> usize {
        self.cells.iter().filter(|cell| cell.case == case).count()
    }

    /// Whether every regime present forms a single region, cells touching at
    /// edges or corners. Thin diagonal bands only meet at corners on a grid.
    pub fn regions_connected(&self) -> bool {
        let (na, nc) = (self.alpha_tilde.len(), self.c.len());
        self.cases_present().into_iter().all(|case| {
            let start = self.cells.iter().position(|cell| cell.case == case).expect("present");
            let mut seen = vec![false; self.cells.len()];
            let mut stack = vec![start];
            seen[start] = true;
            let mut reached = 0;
            while let Some(idx) = stack.pop() {
                reached += 1;
                let (a, k) = (idx / nc, idx % nc);
                let mut nbrs = Vec::with_capacity(8);
                for da in -1i64..=1 {
                    for dk in -1i64..=1 {
                        let (na2, nk2) = (a as i64 + da, k as i64 + dk);
                        if (da, dk) != (0, 0) && (0..na as i64).contains(&na2) && (0..nc as i64).contains(&nk2) {
                            nbrs.push(na2 as usize * nc + nk2 as usize);
                        }
                    }
                }
                for n in nbrs {
                    if !seen[n] && self.cells[n].case == case {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
            reached == self.count(case)
        })
    }

    /// Whether each regime occupies one run along every grid row and column.
    pub fn lines_contiguous(&self) -> bool {
        fn single_runs(seq: impl Iterator<Item = Case>) -> bool {
            let mut closed: Vec<Case> = Vec::new();
            let mut current: Option<Case> = None;
            for case in seq {
                if current != Some(case) {
                    if closed.contains(&case) {
                        return false;
                    }
                    if let Some(prev) = current {
                        closed.push(prev);
                    }
                    current = Some(case);
                }
            }
            true
        }
        let (na, nc) = (self.alpha_tilde.len(), self.c.len());
        (0..na).all(|a| single_runs((0..nc).map(|k| self.cell(a, k).case)))
            && (0..nc).all(|k| single_runs((0..na).map(|a| self.cell(a, k).case)))
    }
}
