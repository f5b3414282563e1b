//! Batch evaluation over (τ, Δ) grids and time traces, with extremum overlay
//! curves and CSV/JSON serialization.
//!
//! Grids are stored row major with τ as the outer (ascending) axis and Δ
//! inner, so exported files are stable golden artifacts. CSV cells carry 17
//! significant digits, enough to round-trip every f64 exactly.

use crate::dynamics::{DrivingProtocol, NoiseModel};
use crate::extremum::{Branch, ExtremumKind, Target};
use crate::solvers::{self, SearchWindow};
use crate::steering::steering_extrema;
use crate::witness::analytic_extrema_zero_omega;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

/// Ceiling on grid allocations unless a caller raises it explicitly.
pub const DEFAULT_CELL_CAP: usize = 16_000_000;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid grid spec: {0}")]
    InvalidSpec(String),
    #[error("grid of {cells} cells exceeds the cap of {cap}")]
    TooManyCells { cells: usize, cap: usize },
    #[error("writing {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("serializing {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
}

/// Rectangular (τ, Δ) evaluation request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_steps: usize,
    pub delta_min: f64,
    pub delta_max: f64,
    pub delta_steps: usize,
    pub omega0: f64,
    pub gamma: f64,
    pub target: Target,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        let finite = [
            ("tau_min", self.tau_min),
            ("tau_max", self.tau_max),
            ("delta_min", self.delta_min),
            ("delta_max", self.delta_max),
            ("omega0", self.omega0),
            ("gamma", self.gamma),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(SweepError::InvalidSpec(format!("{name} must be finite, got {value}")));
            }
        }
        if self.tau_min >= self.tau_max {
            return Err(SweepError::InvalidSpec(format!(
                "tau_min {} must be below tau_max {}",
                self.tau_min, self.tau_max
            )));
        }
        if self.delta_min >= self.delta_max {
            return Err(SweepError::InvalidSpec(format!(
                "delta_min {} must be below delta_max {}",
                self.delta_min, self.delta_max
            )));
        }
        if self.tau_steps < 2 || self.delta_steps < 2 {
            return Err(SweepError::InvalidSpec("both axes need at least 2 steps".into()));
        }
        if self.gamma < 0.0 {
            return Err(SweepError::InvalidSpec(format!(
                "gamma must be nonnegative, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    pub fn taus(&self) -> Vec<f64> {
        linspace(self.tau_min, self.tau_max, self.tau_steps)
    }

    pub fn deltas(&self) -> Vec<f64> {
        linspace(self.delta_min, self.delta_max, self.delta_steps)
    }
}

/// Uniform grid of `steps ≥ 2` points including both endpoints.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    let h = (max - min) / (steps - 1) as f64;
    (0..steps)
        .map(|i| if i == steps - 1 { max } else { min + i as f64 * h })
        .collect()
}

/// One extremum curve Δ(τ) across the grid's τ axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayCurve {
    /// Closed-form family, absent for numerically traced curves.
    pub branch: Option<Branch>,
    pub k: Option<i64>,
    /// (τ, Δ) pairs, clipped to the grid's Δ range.
    pub points: Vec<(f64, f64)>,
}

/// Evaluated grid; `values` is row major, τ outer and ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
    pub overlays: Vec<OverlayCurve>,
}

impl SweepGrid {
    pub fn value_at(&self, tau_index: usize, delta_index: usize) -> f64 {
        self.values[tau_index * self.spec.delta_steps + delta_index]
    }
}

/// Evaluate the grid (no overlays) under the default cell cap.
pub fn grid(spec: &GridSpec) -> Result<SweepGrid, SweepError> {
    grid_with_cap(spec, DEFAULT_CELL_CAP)
}

pub fn grid_with_cap(spec: &GridSpec, cap: usize) -> Result<SweepGrid, SweepError> {
    spec.validate()?;
    let cells = spec
        .tau_steps
        .checked_mul(spec.delta_steps)
        .ok_or(SweepError::TooManyCells { cells: usize::MAX, cap })?;
    if cells > cap {
        return Err(SweepError::TooManyCells { cells, cap });
    }
    let noise = NoiseModel { gamma: spec.gamma };
    let deltas = spec.deltas();
    let mut values = Vec::with_capacity(cells);
    for tau in spec.taus() {
        for &delta in &deltas {
            let drive = DrivingProtocol { omega0: spec.omega0, delta };
            values.push(spec.target.value(tau, &drive, &noise));
        }
    }
    Ok(SweepGrid { spec: spec.clone(), values, overlays: Vec::new() })
}

/// Extremum overlay curves for a grid: the maxima ridges as functions of τ.
///
/// Closed-form families are emitted one curve per (branch, k) — the witness
/// families at ω0 = 0, the steering family at any ω0. For the witness at
/// ω0 ≠ 0 there is no closed form; a single unlabeled curve collects the
/// numerically found maxima column by column. Points falling outside the
/// grid's Δ range are clipped; empty curves are dropped.
pub fn overlay_extrema(spec: &GridSpec, k_range: RangeInclusive<i64>) -> Vec<OverlayCurve> {
    let taus = spec.taus();
    let in_range = |d: f64| d >= spec.delta_min && d <= spec.delta_max;
    let mut curves = Vec::new();
    match (spec.target, spec.omega0 == 0.0) {
        (Target::Steering, _) => {
            for k in k_range {
                let points: Vec<(f64, f64)> = taus
                    .iter()
                    .filter_map(|&tau| {
                        let maxima = steering_extrema(k, tau, spec.omega0).ok()?;
                        let m = maxima.iter().find(|s| s.kind == ExtremumKind::Maximum)?;
                        in_range(m.delta).then_some((tau, m.delta))
                    })
                    .collect();
                if !points.is_empty() {
                    curves.push(OverlayCurve { branch: Some(Branch::D1), k: Some(k), points });
                }
            }
        }
        (Target::Witness, true) => {
            for k in k_range {
                for branch in [Branch::D1, Branch::D2, Branch::D3] {
                    let points: Vec<(f64, f64)> = taus
                        .iter()
                        .filter_map(|&tau| {
                            let sols = analytic_extrema_zero_omega(k, tau).ok()?;
                            let m = sols.iter().find(|s| s.branch == Some(branch))?;
                            in_range(m.delta).then_some((tau, m.delta))
                        })
                        .collect();
                    if !points.is_empty() {
                        curves.push(OverlayCurve { branch: Some(branch), k: Some(k), points });
                    }
                }
            }
        }
        (Target::Witness, false) => {
            if k_range.is_empty() {
                return curves;
            }
            let mut points = Vec::new();
            for &tau in &taus {
                let Ok(window) = SearchWindow::new(spec.delta_min, spec.delta_max) else {
                    continue;
                };
                let Ok(sols) =
                    solvers::find_extrema(spec.target, tau, spec.omega0, spec.gamma, &window)
                else {
                    continue;
                };
                points.extend(
                    sols.iter()
                        .filter(|s| s.kind == ExtremumKind::Maximum)
                        .map(|s| (tau, s.delta)),
                );
            }
            if !points.is_empty() {
                curves.push(OverlayCurve { branch: None, k: None, points });
            }
        }
    }
    curves
}

/// One sample of a time trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub tau: f64,
    pub value: f64,
    pub bound: f64,
}

/// Time trace of a measure at fixed Δ, with its dephasing ceiling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub target: Target,
    pub delta: f64,
    pub omega0: f64,
    pub gamma: f64,
    pub points: Vec<TracePoint>,
}

pub fn trace(target: Target, taus: &[f64], delta: f64, omega0: f64, gamma: f64) -> Trace {
    let drive = DrivingProtocol { omega0, delta };
    let noise = NoiseModel { gamma };
    let points = taus
        .iter()
        .map(|&tau| TracePoint {
            tau,
            value: target.value(tau, &drive, &noise),
            bound: target.bound(tau, &noise),
        })
        .collect();
    Trace { target, delta, omega0, gamma, points }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(format!("unknown format '{other}' (expected 'csv' or 'json')")),
        }
    }
}

/// 17 significant digits: every f64 parses back bit-exactly.
fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepGrid {
    /// `tau,delta,value,bound` — one grid cell per line, τ outer.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let noise = NoiseModel { gamma: self.spec.gamma };
        let taus = self.spec.taus();
        let deltas = self.spec.deltas();
        let mut line = String::new();
        writeln!(w, "tau,delta,value,bound")?;
        for (i, &tau) in taus.iter().enumerate() {
            let bound = self.spec.target.bound(tau, &noise);
            for (j, &delta) in deltas.iter().enumerate() {
                line.clear();
                let _ = write!(
                    line,
                    "{},{},{},{}",
                    fmt_float(tau),
                    fmt_float(delta),
                    fmt_float(self.value_at(i, j)),
                    fmt_float(bound)
                );
                writeln!(w, "{line}")?;
            }
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<(), serde_json::Error> {
        serde_json::to_writer_pretty(&mut w, self)?;
        let _ = w.write_all(b"\n");
        Ok(())
    }
}

impl Trace {
    /// Same `tau,delta,value,bound` schema as grids, Δ constant.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "tau,delta,value,bound")?;
        for p in &self.points {
            writeln!(
                w,
                "{},{},{},{}",
                fmt_float(p.tau),
                fmt_float(self.delta),
                fmt_float(p.value),
                fmt_float(p.bound)
            )?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<(), serde_json::Error> {
        serde_json::to_writer_pretty(&mut w, self)?;
        let _ = w.write_all(b"\n");
        Ok(())
    }
}

fn create(path: &Path) -> Result<io::BufWriter<std::fs::File>, SweepError> {
    std::fs::File::create(path)
        .map(io::BufWriter::new)
        .map_err(|source| SweepError::Io { path: path.to_path_buf(), source })
}

pub fn export_grid(grid: &SweepGrid, format: ExportFormat, path: &Path) -> Result<(), SweepError> {
    let mut w = create(path)?;
    match format {
        ExportFormat::Csv => grid
            .write_csv(&mut w)
            .map_err(|source| SweepError::Io { path: path.to_path_buf(), source }),
        ExportFormat::Json => grid
            .write_json(&mut w)
            .map_err(|source| SweepError::Json { path: path.to_path_buf(), source }),
    }
}

pub fn export_trace(trace: &Trace, format: ExportFormat, path: &Path) -> Result<(), SweepError> {
    let mut w = create(path)?;
    match format {
        ExportFormat::Csv => trace
            .write_csv(&mut w)
            .map_err(|source| SweepError::Io { path: path.to_path_buf(), source }),
        ExportFormat::Json => trace
            .write_json(&mut w)
            .map_err(|source| SweepError::Json { path: path.to_path_buf(), source }),
    }
}
