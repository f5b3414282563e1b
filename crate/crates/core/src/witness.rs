//! Closed-form quantum witness of the chirped, dephasing qubit.
//!
//! The protocol starts in |+⟩ and compares the probability of finding |+⟩ at
//! time τ without (`p+`) and with (`p'+`) a nonselective σx measurement at
//! τ/2:
//!
//! ```text
//! p+(τ)  = ½ [1 + e^{-γτ} cos(Δτ²/2 + ω0τ)]
//! p'+(τ) = ½ + ¼ e^{-γτ} [cos(Δτ²/4) + cos(Δτ²/2 + ω0τ)]
//! Wq(τ)  = |p+(τ) - p'+(τ)| = ¼ e^{-γτ} |cos(Δτ²/4) - cos(Δτ²/2 + ω0τ)|
//! ```
//!
//! Any classical (no-signaling-in-time) model has `Wq = 0`; the quantum value
//! is capped by half the l1-norm of coherence, `e^{-γτ}/2`.

use crate::dynamics::{DrivingProtocol, NoiseModel};
use crate::extremum::{Branch, ExtremumError, ExtremumKind, ExtremumSolution};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Phase accumulated over the first half of the protocol and re-traversed by
/// the measured branch: Δτ²/4.
#[inline]
fn half_phase(tau: f64, delta: f64) -> f64 {
    0.25 * delta * tau * tau
}

/// Full protocol phase Δτ²/2 + ω0τ.
#[inline]
fn full_phase(tau: f64, drive: &DrivingProtocol) -> f64 {
    0.5 * drive.delta * tau * tau + drive.omega0 * tau
}

#[inline]
fn decay(tau: f64, noise: &NoiseModel) -> f64 {
    (-noise.gamma * tau).exp()
}

/// Probability of finding |+⟩ at τ with no intermediate measurement.
pub fn prob_plus_unmeasured(tau: f64, drive: &DrivingProtocol, noise: &NoiseModel) -> f64 {
    0.5 * (1.0 + decay(tau, noise) * full_phase(tau, drive).cos())
}

/// Probability of finding |+⟩ at τ after a nonselective σx measurement at τ/2.
pub fn prob_plus_measured(tau: f64, drive: &DrivingProtocol, noise: &NoiseModel) -> f64 {
    let e = decay(tau, noise);
    0.5 + 0.25 * e * (half_phase(tau, drive.delta).cos() + full_phase(tau, drive).cos())
}

/// Quantum witness `Wq(τ) = |p+(τ) - p'+(τ)|`.
pub fn witness_value(tau: f64, drive: &DrivingProtocol, noise: &NoiseModel) -> f64 {
    (prob_plus_unmeasured(tau, drive, noise) - prob_plus_measured(tau, drive, noise)).abs()
}

/// Dephasing-limited witness ceiling: half the l1-norm of coherence,
/// `e^{-γτ}/2`.
pub fn coherence_bound(tau: f64, noise: &NoiseModel) -> f64 {
    0.5 * decay(tau, noise)
}

/// γ-free factor of ∂Wq/∂Δ whose zeros are the stationary-point candidates:
/// `sin(Δτ²/4) - 2 sin(Δτ²/2 + ω0τ)`.
pub(crate) fn stationarity_bracket(tau: f64, delta: f64, omega0: f64) -> f64 {
    let drive = DrivingProtocol { omega0, delta };
    half_phase(tau, delta).sin() - 2.0 * full_phase(tau, &drive).sin()
}

/// Partial derivative ∂Wq/∂Δ:
/// `-(τ²/16) e^{-γτ} [sin(Δτ²/4) - 2 sin(Δτ²/2 + ω0τ)] · sgn[cos(Δτ²/4) - cos(Δτ²/2 + ω0τ)]`.
///
/// The sign factor vanishes exactly where Wq = 0; the two-sided derivative of
/// |·| does not exist there, and this function returns 0 by convention (those
/// points are minima, and the convention keeps root scans stable).
pub fn witness_delta_derivative(tau: f64, drive: &DrivingProtocol, noise: &NoiseModel) -> f64 {
    let c_half = half_phase(tau, drive.delta).cos();
    let c_full = full_phase(tau, drive).cos();
    let sign = if c_half > c_full {
        1.0
    } else if c_half < c_full {
        -1.0
    } else {
        return 0.0;
    };
    -(tau * tau / 16.0)
        * decay(tau, noise)
        * stationarity_bracket(tau, drive.delta, drive.omega0)
        * sign
}

/// Witness quantities at a single time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessPoint {
    pub tau: f64,
    pub p_plus: f64,
    pub p_plus_measured: f64,
    /// `|p_plus - p_plus_measured|`.
    pub value: f64,
    /// Coherence ceiling `e^{-γτ}/2`.
    pub bound: f64,
}

pub fn witness_point(tau: f64, drive: &DrivingProtocol, noise: &NoiseModel) -> WitnessPoint {
    let p_plus = prob_plus_unmeasured(tau, drive, noise);
    let p_plus_measured = prob_plus_measured(tau, drive, noise);
    WitnessPoint {
        tau,
        p_plus,
        p_plus_measured,
        value: (p_plus - p_plus_measured).abs(),
        bound: coherence_bound(tau, noise),
    }
}

/// Closed-form stationary chirps of the witness for ω0 = 0 and family index
/// `k`, sorted by Δ.
///
/// Returns the minimum `D0 = 8πk/τ²` (where Wq = 0) and the three maxima
/// `D1 = 4π(2k+1)/τ²` (saturating the coherence bound), `D2` and `D3`
/// `= 4(2πk ∓ arctan√15)/τ²` (value (9/32)·e^{-γτ}). The chirps are
/// independent of γ; the reported `value` is the γ = 0 witness value.
pub fn analytic_extrema_zero_omega(
    k: i64,
    tau: f64,
) -> Result<Vec<ExtremumSolution>, ExtremumError> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(ExtremumError::NonPositiveTau(tau));
    }
    let tau_sq = tau * tau;
    let kf = k as f64;
    let theta = 15.0_f64.sqrt().atan();
    let noise = NoiseModel::dephasing_free();
    let solution = |branch: Branch, delta: f64, kind: ExtremumKind| {
        let drive = DrivingProtocol { omega0: 0.0, delta };
        ExtremumSolution {
            delta,
            branch: Some(branch),
            k: Some(k),
            kind,
            value: witness_value(tau, &drive, &noise),
        }
    };
    let mut out = vec![
        solution(Branch::D0, 8.0 * PI * kf / tau_sq, ExtremumKind::Minimum),
        solution(Branch::D1, 4.0 * PI * (2.0 * kf + 1.0) / tau_sq, ExtremumKind::Maximum),
        solution(Branch::D2, 4.0 * (2.0 * PI * kf - theta) / tau_sq, ExtremumKind::Maximum),
        solution(Branch::D3, 4.0 * (2.0 * PI * kf + theta) / tau_sq, ExtremumKind::Maximum),
    ];
    out.sort_by(|a, b| a.delta.total_cmp(&b.delta));
    Ok(out)
}
