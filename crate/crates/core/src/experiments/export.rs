//! CSV output: RFC 4180, UTF-8, one header row, floats to 12 significant digits.

use std::path::Path;

use serde::Deserialize;

use super::eqmap::EquilibriumMap;
use super::sweep::{EfficiencyRow, ResultTable};
use crate::error::{Error, Result};
use crate::simulator::Trajectory;

pub const SIGNIFICANT_DIGITS: usize = 12;

pub const TRAJECTORY_HEADER: [&str; 11] = [
    "t",
    "s",
    "i",
    "q",
    "r",
    "reinfected",
    "case",
    "alpha_si",
    "alpha_r",
    "p",
    "theta",
];

pub const SWEEP_HEADER: [&str; 16] = [
    "alpha_tilde",
    "c",
    "phi",
    "segmented",
    "c_recovered",
    "Z",
    "Z_hat",
    "theta_hat",
    "E",
    "peak_prevalence",
    "peak_day",
    "case1_days",
    "case2_days",
    "case3_days",
    "case4_days",
    "error",
];

pub const EQMAP_HEADER: [&str; 6] = ["alpha_tilde", "c", "case", "alpha_si", "alpha_r", "p"];

pub const EFFICIENCY_HEADER: [&str; 5] = ["c", "Z", "Z_hat", "theta_hat", "E"];

/// `%.12g`-style formatting: shortest of fixed or exponent notation, trailing zeros dropped.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT_DIGITS as i32 {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt_float(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(file))
}

fn write_all<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = writer(path)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.into_iter().collect::<Vec<_>>()).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_all<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(csv_err)
}

pub fn write_trajectory(path: impl AsRef<Path>, traj: &Trajectory) -> Result<()> {
    let rows = traj.records.iter().map(|rec| {
        let act = rec.activities();
        vec![
            rec.day.to_string(),
            format_float(rec.state.s),
            format_float(rec.state.i),
            format_float(rec.state.q),
            format_float(rec.state.r),
            format_float(rec.state.reinfected),
            rec.equilibrium.case.number().to_string(),
            format_float(act.alpha_s),
            format_float(act.alpha_r),
            format_float(rec.equilibrium.compliance_probability(&traj.policy)),
            format_float(rec.theta),
        ]
    });
    write_all(path.as_ref(), &TRAJECTORY_HEADER, rows)
}

/// One parsed line of a trajectory file.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct TrajectoryCsvRow {
    pub t: usize,
    pub s: f64,
    pub i: f64,
    pub q: f64,
    pub r: f64,
    pub reinfected: f64,
    pub case: u8,
    pub alpha_si: f64,
    pub alpha_r: f64,
    pub p: f64,
    pub theta: f64,
}

pub fn read_trajectory(path: impl AsRef<Path>) -> Result<Vec<TrajectoryCsvRow>> {
    read_all(path.as_ref())
}

pub fn write_result_table(path: impl AsRef<Path>, table: &ResultTable) -> Result<()> {
    let rows = table.rows.iter().map(|row| {
        let o = row.outcome;
        let mut rec = vec![
            format_float(row.alpha_tilde),
            format_float(row.c),
            format_float(row.phi),
            row.segmented.to_string(),
            format_float(row.c_recovered),
            opt_float(o.map(|o| o.total_infections)),
            opt_float(o.map(|o| o.infection_reduction)),
            opt_float(o.map(|o| o.activity_loss)),
            opt_float(o.and_then(|o| o.efficiency)),
            opt_float(o.map(|o| o.peak_prevalence)),
            o.map(|o| o.peak_day.to_string()).unwrap_or_default(),
        ];
        rec.extend(row.case_days.iter().map(usize::to_string));
        rec.push(row.error.clone().unwrap_or_default());
        rec
    });
    write_all(path.as_ref(), &SWEEP_HEADER, rows)
}

/// One parsed line of a sweep file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SweepCsvRow {
    pub alpha_tilde: f64,
    pub c: f64,
    pub phi: f64,
    pub segmented: bool,
    pub c_recovered: f64,
    #[serde(rename = "Z")]
    pub z: Option<f64>,
    #[serde(rename = "Z_hat")]
    pub z_hat: Option<f64>,
    pub theta_hat: Option<f64>,
    #[serde(rename = "E")]
    pub e: Option<f64>,
    pub peak_prevalence: Option<f64>,
    pub peak_day: Option<usize>,
    pub case1_days: usize,
    pub case2_days: usize,
    pub case3_days: usize,
    pub case4_days: usize,
    pub error: Option<String>,
}

pub fn read_result_table(path: impl AsRef<Path>) -> Result<Vec<SweepCsvRow>> {
    read_all(path.as_ref())
}

pub fn write_equilibrium_map(path: impl AsRef<Path>, map: &EquilibriumMap) -> Result<()> {
    let rows = map.cells.iter().map(|cell| {
        vec![
            format_float(cell.alpha_tilde),
            format_float(cell.c),
            cell.case.number().to_string(),
            format_float(cell.alpha_si),
            format_float(cell.alpha_r),
            format_float(cell.p),
        ]
    });
    write_all(path.as_ref(), &EQMAP_HEADER, rows)
}

pub fn write_efficiency(path: impl AsRef<Path>, rows: &[EfficiencyRow]) -> Result<()> {
    let rows = rows.iter().map(|row| {
        vec![
            format_float(row.c),
            format_float(row.total_infections),
            format_float(row.infection_reduction),
            format_float(row.activity_loss),
            opt_float(row.efficiency),
        ]
    });
    write_all(path.as_ref(), &EFFICIENCY_HEADER, rows)
}

/// Prevalence of several runs side by side: `t`, then one `i` column per labelled run.
///
/// Runs shorter than the longest leave trailing cells empty.
pub fn write_prevalence_panel(path: impl AsRef<Path>, runs: &[(String, &Trajectory)]) -> Result<()> {
    let mut header = vec!["t".to_string()];
    header.extend(runs.iter().map(|(label, _)| label.clone()));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let len = runs.iter().map(|(_, t)| t.len()).max().unwrap_or(0);
    let rows = (0..len).map(|day| {
        let mut rec = vec![day.to_string()];
        rec.extend(
            runs.iter()
                .map(|(_, t)| t.records.get(day).map(|r| format_float(r.state.i)).unwrap_or_default()),
        );
        rec
    });
    write_all(path.as_ref(), &header, rows)
}
