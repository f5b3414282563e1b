//! Closed-form temporal steering parameter of the chirped, dephasing qubit.
//!
//! Alice projects the maximally mixed state onto a σx or σy eigenstate at
//! t = 0; Bob measures the same Pauli operator at t = τ. Summed over the two
//! mutually unbiased bases, the squared conditional expectations give
//!
//! ```text
//! S2(τ) = 2 e^{-2γτ} cos²(Δτ²/2 + ω0τ)
//! ```
//!
//! Classical (hidden-channel) dynamics obey `S2 ≤ 1`; values above 1 certify
//! stronger-than-classical temporal correlations. The quantum ceiling is
//! twice the squared l1-norm of coherence, `2 e^{-2γτ}`.

use crate::dynamics::{DrivingProtocol, NoiseModel};
use crate::extremum::{Branch, ExtremumError, ExtremumKind, ExtremumSolution};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Classical ceiling of the steering inequality.
pub const CLASSICAL_STEERING_BOUND: f64 = 1.0;

#[inline]
fn full_phase(tau: f64, drive: &DrivingProtocol) -> f64 {
    0.5 * drive.delta * tau * tau + drive.omega0 * tau
}

/// Steering parameter `S2(τ) = 2 e^{-2γτ} cos²(Δτ²/2 + ω0τ)` over the σx/σy
/// bases.
pub fn steering_value(tau: f64, drive: &DrivingProtocol, noise: &NoiseModel) -> f64 {
    let c = full_phase(tau, drive).cos();
    steering_bound(tau, noise) * c * c
}

/// Coherence ceiling `2 e^{-2γτ}` of the steering parameter.
pub fn steering_bound(tau: f64, noise: &NoiseModel) -> f64 {
    2.0 * (-2.0 * noise.gamma * tau).exp()
}

/// γ-free factor of ∂S2/∂Δ whose zeros are the stationary-point candidates:
/// `sin(Δτ² + 2ω0τ)`.
pub(crate) fn stationarity_bracket(tau: f64, delta: f64, omega0: f64) -> f64 {
    (delta * tau * tau + 2.0 * omega0 * tau).sin()
}

/// Partial derivative `∂S2/∂Δ = -τ² e^{-2γτ} sin(Δτ² + 2ω0τ)`.
pub fn steering_delta_derivative(tau: f64, drive: &DrivingProtocol, noise: &NoiseModel) -> f64 {
    -tau * tau
        * (-2.0 * noise.gamma * tau).exp()
        * stationarity_bracket(tau, drive.delta, drive.omega0)
}

/// Steering quantities at a single time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteeringPoint {
    pub tau: f64,
    pub value: f64,
    /// Coherence ceiling `2 e^{-2γτ}`.
    pub bound: f64,
    /// Whether `value > 1`, i.e. the classical inequality is violated.
    pub violates_inequality: bool,
}

pub fn steering_point(tau: f64, drive: &DrivingProtocol, noise: &NoiseModel) -> SteeringPoint {
    let value = steering_value(tau, drive, noise);
    SteeringPoint {
        tau,
        value,
        bound: steering_bound(tau, noise),
        violates_inequality: value > CLASSICAL_STEERING_BOUND,
    }
}

/// Closed-form stationary chirps of the steering parameter for family index
/// `k` at any ω0, sorted by Δ.
///
/// The maxima `D1 = (2kπ - 2ω0τ)/τ²` saturate the coherence ceiling exactly
/// (cos² = 1); the minima `D0 = ((2k+1)π - 2ω0τ)/τ²` give S2 = 0. The chirps
/// are independent of γ; the reported `value` is the γ = 0 steering value.
pub fn steering_extrema(
    k: i64,
    tau: f64,
    omega0: f64,
) -> Result<Vec<ExtremumSolution>, ExtremumError> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(ExtremumError::NonPositiveTau(tau));
    }
    let tau_sq = tau * tau;
    let kf = k as f64;
    let noise = NoiseModel::dephasing_free();
    let solution = |branch: Branch, delta: f64, kind: ExtremumKind| {
        let drive = DrivingProtocol { omega0, delta };
        ExtremumSolution {
            delta,
            branch: Some(branch),
            k: Some(k),
            kind,
            value: steering_value(tau, &drive, &noise),
        }
    };
    let maximum = solution(
        Branch::D1,
        (2.0 * kf * PI - 2.0 * omega0 * tau) / tau_sq,
        ExtremumKind::Maximum,
    );
    let minimum = solution(
        Branch::D0,
        ((2.0 * kf + 1.0) * PI - 2.0 * omega0 * tau) / tau_sq,
        ExtremumKind::Minimum,
    );
    Ok(vec![maximum, minimum])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
        assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (|diff| = {})", (a - b).abs());
    }

    #[test]
    fn perfect_correlation_at_tau_zero() {
        let drive = DrivingProtocol { omega0: 1.0, delta: 0.7 };
        let noise = NoiseModel { gamma: 0.2 };
        assert_eq!(steering_value(0.0, &drive, &noise), 2.0);
        assert_eq!(steering_bound(0.0, &noise), 2.0);
        assert!(steering_point(0.0, &drive, &noise).violates_inequality);
    }

    #[test]
    fn quarter_period_null() {
        // Δ = 0, ω0τ = π/2: cos² = 0.
        let drive = DrivingProtocol { omega0: 1.0, delta: 0.0 };
        let noise = NoiseModel { gamma: 0.1 };
        let s = steering_value(FRAC_PI_2, &drive, &noise);
        assert!(s < 1e-30, "S2 at quarter period = {s}");
    }

    #[test]
    fn full_period_value() {
        // Δ = 0, ω0 = 1, γ = 0.06, τ = π: cos²(π) = 1 so S2 = 2e^{-2γπ}.
        let drive = DrivingProtocol { omega0: 1.0, delta: 0.0 };
        let noise = NoiseModel { gamma: 0.06 };
        assert_close(steering_value(PI, &drive, &noise), 2.0 * (-0.12 * PI).exp(), 1e-14, "S2(π)");
    }

    #[test]
    fn bound_is_universal_envelope() {
        let noise = NoiseModel { gamma: 0.06 };
        assert_eq!(steering_bound(3.0, &NoiseModel::dephasing_free()), 2.0);
        for i in 0..500 {
            let tau = 0.03 * i as f64;
            let drive = DrivingProtocol { omega0: 1.4, delta: -0.8 };
            let p = steering_point(tau, &drive, &noise);
            assert!(p.value <= p.bound);
            assert!(p.bound <= 2.0);
            assert_eq!(p.violates_inequality, p.value > 1.0);
        }
    }

    #[test]
    fn extrema_example_fig4_operating_point() {
        // k = 2, τ = 3π/2, ω0 = 1: maximum at Δ = π/τ² ≈ 0.1415.
        let tau = 1.5 * PI;
        let sols = steering_extrema(2, tau, 1.0).unwrap();
        let max = sols.iter().find(|s| s.is_maximum()).unwrap();
        assert_close(max.delta, PI / (tau * tau), 1e-15, "Δ1(2, 3π/2)");
        assert_close(max.delta, 0.1415, 5e-4, "rounds to 0.14");
    }

    #[test]
    fn undriven_maximum_at_zero_chirp() {
        // ω0 = 0, k = 0: the undriven qubit is already at a phase maximum.
        let sols = steering_extrema(0, 2.0, 0.0).unwrap();
        let max = sols.iter().find(|s| s.is_maximum()).unwrap();
        assert_eq!(max.delta, 0.0);
        let noise = NoiseModel { gamma: 0.3 };
        let drive = DrivingProtocol { omega0: 0.0, delta: max.delta };
        assert_close(
            steering_value(2.0, &drive, &noise),
            steering_bound(2.0, &noise),
            1e-15,
            "S2 at undriven max",
        );
    }

    #[test]
    fn maxima_saturate_and_minima_vanish() {
        let noise = NoiseModel { gamma: 0.06 };
        for k in -3..=3 {
            for (tau, omega0) in [(1.0, 0.0), (4.7, 1.0), (9.3, 1.7)] {
                for s in steering_extrema(k, tau, omega0).unwrap() {
                    let drive = DrivingProtocol { omega0, delta: s.delta };
                    let v = steering_value(tau, &drive, &noise);
                    if s.is_maximum() {
                        assert_close(v, steering_bound(tau, &noise), 1e-12, "saturation");
                    } else {
                        assert!(v < 1e-12, "minimum value {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn extrema_reject_zero_tau() {
        assert!(steering_extrema(0, 0.0, 1.0).is_err());
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let noise = NoiseModel { gamma: 0.06 };
        let tau = 3.3;
        for i in 0..80 {
            let delta = -1.9 + 0.05 * i as f64;
            let drive = DrivingProtocol { omega0: 1.2, delta };
            let h = 1e-5;
            let sp = steering_value(tau, &DrivingProtocol { omega0: 1.2, delta: delta + h }, &noise);
            let sm = steering_value(tau, &DrivingProtocol { omega0: 1.2, delta: delta - h }, &noise);
            let fd = (sp - sm) / (2.0 * h);
            let exact = steering_delta_derivative(tau, &drive, &noise);
            assert_close(fd, exact, 1e-6, "fd vs analytic derivative");
        }
    }

    #[test]
    fn derivative_trivial_at_tau_zero() {
        let drive = DrivingProtocol { omega0: 1.0, delta: 0.9 };
        let noise = NoiseModel { gamma: 0.06 };
        assert_eq!(steering_delta_derivative(0.0, &drive, &noise), 0.0);
    }

    #[test]
    fn derivative_vanishes_at_extrema() {
        let noise = NoiseModel { gamma: 0.06 };
        for k in -2..=2 {
            for s in steering_extrema(k, 4.0, 1.0).unwrap() {
                let drive = DrivingProtocol { omega0: 1.0, delta: s.delta };
                let d = steering_delta_derivative(4.0, &drive, &noise);
                assert!(d.abs() < 1e-12, "∂S2/∂Δ at extremum = {d}");
            }
        }
    }
}
