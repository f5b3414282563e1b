//! Numerical location of witness/steering extrema in Δ and drive tailoring.
//!
//! The Δ-derivative of either measure factorizes into a positive prefactor, a
//! smooth γ-free oscillatory factor, and (for the witness) a sign that flips
//! only where the measure vanishes. Roots of the smooth factor are exactly
//! the stationary-point candidates, so the solver runs a dense sign-change
//! scan over a Δ window and refines each bracket by bisection — robust where
//! Newton iterations on the discontinuous witness derivative are not. Found
//! roots are classified by comparing the measure against its neighbors one
//! scan step away, and matched back to the closed-form families when one
//! applies.

use crate::dynamics::{DrivingProtocol, NoiseModel};
use crate::extremum::{Branch, ExtremumKind, ExtremumSolution, Target};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

pub const DEFAULT_SCAN_POINTS: usize = 2048;
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;

/// Half-width of the default window in units of 1/τ²: covers the first three
/// saturating-maximum families on either side of Δ = 0.
const DEFAULT_WINDOW_HALF_WIDTH: f64 = 12.0 * PI;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("tau must be positive and finite, got {0}")]
    NonPositiveTau(f64),
    #[error("omega0 must be finite, got {0}")]
    NonFiniteOmega(f64),
    #[error("dephasing rate must be nonnegative and finite, got {0}")]
    InvalidRate(f64),
    #[error("invalid search window: {0}")]
    InvalidWindow(String),
    #[error("bisection did not reach tolerance {root_tol} within {max_iterations} iterations")]
    NonConvergence { root_tol: f64, max_iterations: usize },
    #[error("no maximum of the target inside the window [{delta_min}, {delta_max}]")]
    NoMaximum { delta_min: f64, delta_max: f64 },
}

/// Δ window and refinement settings for the extremum scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchWindow {
    pub delta_min: f64,
    pub delta_max: f64,
    pub scan_points: usize,
    pub root_tol: f64,
    pub max_iterations: usize,
}

impl SearchWindow {
    /// Window over `[delta_min, delta_max]` with default scan settings.
    pub fn new(delta_min: f64, delta_max: f64) -> Result<Self, SolverError> {
        let w = Self {
            delta_min,
            delta_max,
            scan_points: DEFAULT_SCAN_POINTS,
            root_tol: DEFAULT_ROOT_TOL,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        };
        w.validate()?;
        Ok(w)
    }

    /// Default window `[-12π/τ², 12π/τ²]`, scaled to track the natural 1/τ²
    /// spacing of the stationary chirps.
    pub fn centered_for(tau: f64) -> Result<Self, SolverError> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(SolverError::NonPositiveTau(tau));
        }
        let half = DEFAULT_WINDOW_HALF_WIDTH / (tau * tau);
        Self::new(-half, half)
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !self.delta_min.is_finite() || !self.delta_max.is_finite() {
            return Err(SolverError::InvalidWindow("window bounds must be finite".into()));
        }
        if self.delta_min >= self.delta_max {
            return Err(SolverError::InvalidWindow(format!(
                "delta_min {} must be below delta_max {}",
                self.delta_min, self.delta_max
            )));
        }
        if self.scan_points < 2 {
            return Err(SolverError::InvalidWindow(format!(
                "scan_points must be at least 2, got {}",
                self.scan_points
            )));
        }
        if !(self.root_tol > 0.0) || !self.root_tol.is_finite() {
            return Err(SolverError::InvalidWindow(format!(
                "root_tol must be positive, got {}",
                self.root_tol
            )));
        }
        if self.max_iterations == 0 {
            return Err(SolverError::InvalidWindow("max_iterations must be nonzero".into()));
        }
        Ok(())
    }

    fn scan_step(&self) -> f64 {
        (self.delta_max - self.delta_min) / (self.scan_points - 1) as f64
    }
}

/// Outcome of tailoring the drive at a chosen time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailorResult {
    /// Chirp rate maximizing the target in the window.
    pub delta_star: f64,
    /// Target value at `delta_star`.
    pub target_value: f64,
    /// Dephasing-limited ceiling at the chosen time.
    pub bound_value: f64,
    /// `target_value / bound_value`, clamped to [0, 1].
    pub saturation_ratio: f64,
    /// Every stationary point found in the window.
    pub all_extrema: Vec<ExtremumSolution>,
}

fn bisect<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    root_tol: f64,
    max_iterations: usize,
) -> Result<f64, SolverError> {
    for _ in 0..max_iterations {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= root_tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(SolverError::NonConvergence { root_tol, max_iterations })
}

/// Match a refined root against the closed-form chirp families, where one
/// exists (steering at any ω0; witness at ω0 = 0).
fn label_root(target: Target, tau: f64, omega0: f64, root: f64, tol: f64) -> (Option<Branch>, Option<i64>) {
    let tau_sq = tau * tau;
    match target {
        Target::Steering => {
            let k = ((root * tau_sq + 2.0 * omega0 * tau) / PI).round() as i64;
            let exact = (k as f64 * PI - 2.0 * omega0 * tau) / tau_sq;
            if (exact - root).abs() <= tol {
                if k.rem_euclid(2) == 0 {
                    (Some(Branch::D1), Some(k.div_euclid(2)))
                } else {
                    (Some(Branch::D0), Some((k - 1).div_euclid(2)))
                }
            } else {
                (None, None)
            }
        }
        Target::Witness => {
            if omega0 != 0.0 {
                return (None, None);
            }
            let u = 0.25 * root * tau_sq;
            let theta = 15.0_f64.sqrt().atan();
            let k0 = (u / (2.0 * PI)).round();
            let k1 = ((u / PI - 1.0) / 2.0).round();
            let k2 = ((u + theta) / (2.0 * PI)).round();
            let k3 = ((u - theta) / (2.0 * PI)).round();
            let candidates = [
                (Branch::D0, k0, 8.0 * PI * k0 / tau_sq),
                (Branch::D1, k1, 4.0 * PI * (2.0 * k1 + 1.0) / tau_sq),
                (Branch::D2, k2, 4.0 * (2.0 * PI * k2 - theta) / tau_sq),
                (Branch::D3, k3, 4.0 * (2.0 * PI * k3 + theta) / tau_sq),
            ];
            let mut best: Option<(Branch, i64, f64)> = None;
            for (branch, k, delta) in candidates {
                let dist = (delta - root).abs();
                if best.map_or(true, |(_, _, d)| dist < d) {
                    best = Some((branch, k as i64, dist));
                }
            }
            match best {
                Some((branch, k, dist)) if dist <= tol => (Some(branch), Some(k)),
                _ => (None, None),
            }
        }
    }
}

/// Locate every stationary point of `target` in Δ inside the window, sorted
/// by Δ.
///
/// Runs a dense scan of the smooth stationarity factor over `scan_points`
/// abscissas, refines each sign change by bisection to `root_tol`, and
/// classifies each root as maximum or minimum by comparing the target one
/// scan step to either side. An empty result means no sign change in the
/// window — distinct from the `NonConvergence` error.
pub fn find_extrema(
    target: Target,
    tau: f64,
    omega0: f64,
    gamma: f64,
    window: &SearchWindow,
) -> Result<Vec<ExtremumSolution>, SolverError> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(SolverError::NonPositiveTau(tau));
    }
    if !omega0.is_finite() {
        return Err(SolverError::NonFiniteOmega(omega0));
    }
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(SolverError::InvalidRate(gamma));
    }
    window.validate()?;

    let f = |delta: f64| target.stationarity_bracket(tau, delta, omega0);
    let n = window.scan_points;
    let step = window.scan_step();
    let abscissa = |i: usize| {
        if i == n - 1 {
            window.delta_max
        } else {
            window.delta_min + i as f64 * step
        }
    };

    let mut roots: Vec<f64> = Vec::new();
    let mut prev_x = abscissa(0);
    let mut prev_f = f(prev_x);
    if prev_f == 0.0 {
        roots.push(prev_x);
    }
    for i in 1..n {
        let x = abscissa(i);
        let fx = f(x);
        if fx == 0.0 {
            roots.push(x);
        } else if prev_f != 0.0 && (fx > 0.0) != (prev_f > 0.0) {
            roots.push(bisect(&f, prev_x, x, prev_f, window.root_tol, window.max_iterations)?);
        }
        prev_x = x;
        prev_f = fx;
    }

    let noise = NoiseModel { gamma };
    let match_tol = 4.0 * window.root_tol.max(f64::EPSILON * (1.0 + window.delta_max.abs()));
    let mut out: Vec<ExtremumSolution> = roots
        .into_iter()
        .map(|delta| {
            let value_at = |d: f64| target.value(tau, &DrivingProtocol { omega0, delta: d }, &noise);
            let here = value_at(delta);
            let kind = if here >= value_at(delta - step) && here >= value_at(delta + step) {
                ExtremumKind::Maximum
            } else {
                ExtremumKind::Minimum
            };
            let (branch, k) = label_root(target, tau, omega0, delta, match_tol);
            ExtremumSolution { delta, branch, k, kind, value: here }
        })
        .collect();
    out.sort_by(|a, b| a.delta.total_cmp(&b.delta));
    Ok(out)
}

/// Pick the drive that maximizes `target` at the chosen time `tau_star`.
///
/// Among the maxima found in the window, the largest target value wins; ties
/// are broken toward the weakest drive (smallest |Δ|), and toward positive Δ
/// between mirror-image chirps.
pub fn tailor(
    target: Target,
    tau_star: f64,
    omega0: f64,
    gamma: f64,
    window: &SearchWindow,
) -> Result<TailorResult, SolverError> {
    let all_extrema = find_extrema(target, tau_star, omega0, gamma, window)?;
    let maxima: Vec<&ExtremumSolution> =
        all_extrema.iter().filter(|s| s.kind == ExtremumKind::Maximum).collect();
    if maxima.is_empty() {
        return Err(SolverError::NoMaximum {
            delta_min: window.delta_min,
            delta_max: window.delta_max,
        });
    }

    let best_value = maxima.iter().map(|s| s.value).fold(f64::NEG_INFINITY, f64::max);
    let value_tie = 1e-9 * best_value.abs().max(1.0);
    let delta_tie = 4.0 * window.root_tol;
    let mut best: Option<&ExtremumSolution> = None;
    for &candidate in &maxima {
        if candidate.value < best_value - value_tie {
            continue;
        }
        match best {
            None => best = Some(candidate),
            Some(current) => {
                let (ca, cb) = (candidate.delta.abs(), current.delta.abs());
                if ca < cb - delta_tie
                    || ((ca - cb).abs() <= delta_tie && candidate.delta > current.delta)
                {
                    best = Some(candidate);
                }
            }
        }
    }
    let best = best.expect("a maximum within value_tie of best_value exists");

    let noise = NoiseModel { gamma };
    let bound_value = target.bound(tau_star, &noise);
    let target_value = best.value;
    Ok(TailorResult {
        delta_star: best.delta,
        target_value,
        bound_value,
        saturation_ratio: (target_value / bound_value).clamp(0.0, 1.0),
        all_extrema,
    })
}
