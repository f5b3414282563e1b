//! Closed-form Bloch-vector dynamics of the chirped, dephasing qubit.
//!
//! In the {σx, σy, σz} expectation-value basis the equations of motion are
//!
//! ```text
//! d⟨σx⟩/dt = -γ⟨σx⟩ - ω(t)⟨σy⟩
//! d⟨σy⟩/dt =  ω(t)⟨σx⟩ - γ⟨σy⟩
//! d⟨σz⟩/dt =  0
//! ```
//!
//! so the flow factorizes into a damped rotation of the transverse (x, y)
//! block — uniform contraction by `e^{-γ(t2-t1)}` times a rotation by the
//! accumulated phase `∫ ω(t) dt` — while z is conserved. [`PropagatorBlock`]
//! holds that 2×2 block; the trivial z and identity rows are never stored.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack allowed on the squared Bloch-vector norm of a valid state.
pub const BLOCH_NORM_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("non-finite input: {name} = {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("time interval is reversed: t1 = {t1} > t2 = {t2}")]
    ReversedInterval { t1: f64, t2: f64 },
    #[error("dephasing rate must be nonnegative, got {0}")]
    NegativeRate(f64),
    #[error("Bloch vector ({x}, {y}, {z}) has squared norm {norm_sq} > 1 + slack")]
    NormTooLarge { x: f64, y: f64, z: f64, norm_sq: f64 },
}

fn ensure_finite(name: &'static str, value: f64) -> Result<(), DynamicsError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(DynamicsError::NonFinite { name, value })
    }
}

/// Linear frequency ramp `ω(t) = ω0 + Δ·t`.
///
/// `delta` is the chirp rate; `delta = 0` recovers the undriven qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrivingProtocol {
    /// Frequency offset ω0 (rad/time).
    pub omega0: f64,
    /// Chirp rate Δ (rad/time²); may be negative or zero.
    pub delta: f64,
}

impl DrivingProtocol {
    pub fn new(omega0: f64, delta: f64) -> Result<Self, DynamicsError> {
        ensure_finite("omega0", omega0)?;
        ensure_finite("delta", delta)?;
        Ok(Self { omega0, delta })
    }

    pub fn undriven(omega0: f64) -> Result<Self, DynamicsError> {
        Self::new(omega0, 0.0)
    }

    /// Instantaneous level splitting ω(t).
    pub fn frequency(&self, t: f64) -> f64 {
        self.omega0 + self.delta * t
    }
}

/// Pure dephasing at rate γ ≥ 0; γ = 0 means unitary evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Dephasing rate γ (1/time).
    pub gamma: f64,
}

impl NoiseModel {
    pub fn new(gamma: f64) -> Result<Self, DynamicsError> {
        ensure_finite("gamma", gamma)?;
        if gamma < 0.0 {
            return Err(DynamicsError::NegativeRate(gamma));
        }
        Ok(Self { gamma })
    }

    pub fn dephasing_free() -> Self {
        Self { gamma: 0.0 }
    }
}

/// Pauli expectation values (⟨σx⟩, ⟨σy⟩, ⟨σz⟩) of a qubit state.
///
/// The identity expectation is always 1 and is not stored. Physical states
/// satisfy `x² + y² + z² ≤ 1`, with equality for pure states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl PauliVector {
    /// Validating constructor; rejects vectors outside the Bloch ball
    /// (beyond [`BLOCH_NORM_SLACK`]).
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, DynamicsError> {
        ensure_finite("x", x)?;
        ensure_finite("y", y)?;
        ensure_finite("z", z)?;
        let norm_sq = x * x + y * y + z * z;
        if norm_sq > 1.0 + BLOCH_NORM_SLACK {
            return Err(DynamicsError::NormTooLarge { x, y, z, norm_sq });
        }
        Ok(Self { x, y, z })
    }

    pub fn norm_squared(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }
}

/// The σx eigenstate |+⟩, Bloch vector (1, 0, 0) — the initial state of the
/// witness protocol.
pub fn plus_state() -> PauliVector {
    PauliVector { x: 1.0, y: 0.0, z: 0.0 }
}

/// Phase accumulated by the drive between `t1` and `t2`:
/// `∫ ω(t) dt = (t2 - t1)·(ω0 + Δ(t1 + t2)/2)`.
///
/// Antisymmetric under swapping `t1` and `t2`. For the protocol interval
/// `(0, τ)` this is the familiar `Δτ²/2 + ω0τ`.
pub fn phase_integral(t1: f64, t2: f64, drive: &DrivingProtocol) -> Result<f64, DynamicsError> {
    ensure_finite("t1", t1)?;
    ensure_finite("t2", t2)?;
    Ok((t2 - t1) * (drive.omega0 + 0.5 * drive.delta * (t1 + t2)))
}

/// Damped-rotation block propagating the transverse (x, y) Bloch components
/// from `t1` to `t2`.
///
/// The matrix equals `e^{-γ(t2-t1)} R(φ)` with `R` the plane rotation by the
/// accumulated phase φ: both columns have norm `e^{-γ(t2-t1)}` and are
/// mutually orthogonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorBlock {
    m: [[f64; 2]; 2],
    pub t1: f64,
    pub t2: f64,
}

impl PropagatorBlock {
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.m
    }

    /// Map a state through the block; z is conserved.
    pub fn apply(&self, state: &PauliVector) -> PauliVector {
        PauliVector {
            x: self.m[0][0] * state.x + self.m[0][1] * state.y,
            y: self.m[1][0] * state.x + self.m[1][1] * state.y,
            z: state.z,
        }
    }

    /// Compose with a later segment: `self` carries `t1 → t2`, `later`
    /// carries `self.t2 → t3`; the result carries `t1 → t3`.
    pub fn then(&self, later: &PropagatorBlock) -> PropagatorBlock {
        let a = &later.m;
        let b = &self.m;
        PropagatorBlock {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
            t1: self.t1,
            t2: later.t2,
        }
    }

    /// Operator 2-norm (largest singular value). For an exact damped
    /// rotation this equals the contraction factor `e^{-γ(t2-t1)}`.
    pub fn operator_norm(&self) -> f64 {
        let [[a, b], [c, d]] = self.m;
        let p = a * a + b * b + c * c + d * d;
        let det = a * d - b * c;
        let disc = (p * p - 4.0 * det * det).max(0.0);
        (0.5 * (p + disc.sqrt())).sqrt()
    }
}

/// Propagator of the transverse block from `t1` to `t2` (requires `t1 ≤ t2`).
///
/// `propagator(t, t, ..)` is the identity, and segments compose:
/// `propagator(a, b).then(propagator(b, c)) == propagator(a, c)`.
pub fn propagator(
    t1: f64,
    t2: f64,
    drive: &DrivingProtocol,
    noise: &NoiseModel,
) -> Result<PropagatorBlock, DynamicsError> {
    if t1 > t2 {
        return Err(DynamicsError::ReversedInterval { t1, t2 });
    }
    let phi = phase_integral(t1, t2, drive)?;
    let damp = (-noise.gamma * (t2 - t1)).exp();
    let (sin, cos) = phi.sin_cos();
    Ok(PropagatorBlock {
        m: [[damp * cos, -damp * sin], [damp * sin, damp * cos]],
        t1,
        t2,
    })
}

/// Evolve a state from `t1` to `t2` under drive and dephasing.
///
/// The (x, y) components pass through the [`PropagatorBlock`]; z is exactly
/// conserved.
pub fn evolve(
    state: &PauliVector,
    t1: f64,
    t2: f64,
    drive: &DrivingProtocol,
    noise: &NoiseModel,
) -> Result<PauliVector, DynamicsError> {
    Ok(propagator(t1, t2, drive, noise)?.apply(state))
}

/// Nonselective projective σx measurement: ⟨σx⟩ is kept, ⟨σy⟩ and ⟨σz⟩ are
/// erased.
pub fn measurement_dephasing_x(state: &PauliVector) -> PauliVector {
    PauliVector { x: state.x, y: 0.0, z: 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
        assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (|diff| = {})", (a - b).abs());
    }

    /// Composite-Simpson quadrature of ω(t); independent of the closed form.
    fn quad_frequency(t1: f64, t2: f64, drive: &DrivingProtocol, panels: usize) -> f64 {
        let h = (t2 - t1) / panels as f64;
        let mut acc = drive.frequency(t1) + drive.frequency(t2);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * drive.frequency(t1 + i as f64 * h);
        }
        acc * h / 3.0
    }

    /// RK4 on the transverse Bloch ODE; independent of the closed form.
    fn rk4_bloch(mut xy: [f64; 2], t1: f64, t2: f64, drive: &DrivingProtocol, gamma: f64, n: usize) -> [f64; 2] {
        let h = (t2 - t1) / n as f64;
        let rhs = |t: f64, v: [f64; 2]| {
            let w = drive.frequency(t);
            [-gamma * v[0] - w * v[1], w * v[0] - gamma * v[1]]
        };
        for i in 0..n {
            let t = t1 + i as f64 * h;
            let k1 = rhs(t, xy);
            let k2 = rhs(t + 0.5 * h, [xy[0] + 0.5 * h * k1[0], xy[1] + 0.5 * h * k1[1]]);
            let k3 = rhs(t + 0.5 * h, [xy[0] + 0.5 * h * k2[0], xy[1] + 0.5 * h * k2[1]]);
            let k4 = rhs(t + h, [xy[0] + h * k3[0], xy[1] + h * k3[1]]);
            xy[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
            xy[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        }
        xy
    }

    #[test]
    fn phase_integral_over_protocol_interval() {
        // ∫_0^τ ω = Δτ²/2 + ω0τ
        let drive = DrivingProtocol { omega0: 0.7, delta: 0.3 };
        let tau = 2.5;
        let got = phase_integral(0.0, tau, &drive).unwrap();
        assert_close(got, 0.5 * 0.3 * tau * tau + 0.7 * tau, 1e-15, "protocol phase");
    }

    #[test]
    fn phase_integral_empty_interval_is_zero() {
        let drive = DrivingProtocol { omega0: 1.0, delta: -0.4 };
        assert_eq!(phase_integral(1.7, 1.7, &drive).unwrap(), 0.0);
    }

    #[test]
    fn phase_integral_matches_quadrature() {
        let drive = DrivingProtocol { omega0: 1.0, delta: 0.5 };
        // Simpson is exact for a linear integrand; frozen value 3.0.
        let oracle = quad_frequency(0.0, 2.0, &drive, 64);
        assert_close(oracle, 3.0, 1e-13, "quadrature oracle");
        assert_eq!(phase_integral(0.0, 2.0, &drive).unwrap(), 3.0);
    }

    #[test]
    fn phase_integral_is_antisymmetric() {
        let drive = DrivingProtocol { omega0: 0.9, delta: -1.3 };
        let fwd = phase_integral(0.3, 2.1, &drive).unwrap();
        let bwd = phase_integral(2.1, 0.3, &drive).unwrap();
        assert_eq!(fwd, -bwd);
    }

    #[test]
    fn phase_integral_rejects_non_finite() {
        let drive = DrivingProtocol { omega0: 1.0, delta: 0.0 };
        assert!(phase_integral(f64::NAN, 1.0, &drive).is_err());
        assert!(phase_integral(0.0, f64::INFINITY, &drive).is_err());
        assert!(DrivingProtocol::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn propagator_at_equal_times_is_identity() {
        let drive = DrivingProtocol { omega0: 1.0, delta: 0.8 };
        let noise = NoiseModel { gamma: 0.2 };
        let p = propagator(1.3, 1.3, &drive, &noise).unwrap();
        assert_eq!(p.matrix(), [[1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn propagator_rejects_reversed_interval() {
        let drive = DrivingProtocol { omega0: 1.0, delta: 0.0 };
        let noise = NoiseModel { gamma: 0.0 };
        assert!(matches!(
            propagator(2.0, 1.0, &drive, &noise),
            Err(DynamicsError::ReversedInterval { .. })
        ));
    }

    #[test]
    fn undriven_propagator_is_damped_rotation() {
        let (omega0, gamma, tau) = (0.8, 0.15, 1.3);
        let drive = DrivingProtocol { omega0, delta: 0.0 };
        let noise = NoiseModel { gamma };
        let p = propagator(0.0, tau, &drive, &noise).unwrap();
        let damp = (-gamma * tau).exp();
        let expected = [
            [damp * (omega0 * tau).cos(), -damp * (omega0 * tau).sin()],
            [damp * (omega0 * tau).sin(), damp * (omega0 * tau).cos()],
        ];
        for i in 0..2 {
            for j in 0..2 {
                assert_close(p.matrix()[i][j], expected[i][j], 1e-14, "matrix entry");
            }
        }
        // Independent check: RK4 on the Bloch ODE, columns = images of the
        // basis vectors.
        for (col, basis) in [[1.0, 0.0], [0.0, 1.0]].iter().enumerate() {
            let xy = rk4_bloch(*basis, 0.0, tau, &drive, gamma, 20_000);
            assert_close(p.matrix()[0][col], xy[0], 1e-8, "rk4 column x");
            assert_close(p.matrix()[1][col], xy[1], 1e-8, "rk4 column y");
        }
    }

    #[test]
    fn propagator_segments_compose() {
        let drive = DrivingProtocol { omega0: 1.0, delta: 0.6 };
        let noise = NoiseModel { gamma: 0.1 };
        let tau = 3.0;
        let first = propagator(0.0, tau / 2.0, &drive, &noise).unwrap();
        let second = propagator(tau / 2.0, tau, &drive, &noise).unwrap();
        let whole = propagator(0.0, tau, &drive, &noise).unwrap();
        let composed = first.then(&second);
        for i in 0..2 {
            for j in 0..2 {
                assert_close(composed.matrix()[i][j], whole.matrix()[i][j], 1e-12, "composition");
            }
        }
        assert_eq!(composed.t1, 0.0);
        assert_eq!(composed.t2, tau);
    }

    #[test]
    fn operator_norm_is_contraction_factor() {
        let drive = DrivingProtocol { omega0: 1.0, delta: -0.9 };
        let noise = NoiseModel { gamma: 0.25 };
        let p = propagator(0.4, 2.9, &drive, &noise).unwrap();
        assert_close(p.operator_norm(), (-0.25f64 * 2.5).exp(), 1e-12, "2-norm");
    }

    #[test]
    fn evolve_plus_state_transverse_coherence() {
        // ⟨σx⟩(τ) = e^{-γτ} cos(Δτ²/2 + ω0τ) from |+⟩
        let drive = DrivingProtocol { omega0: 1.0, delta: 0.5 };
        let noise = NoiseModel { gamma: 0.1 };
        let tau = 2.3;
        let out = evolve(&plus_state(), 0.0, tau, &drive, &noise).unwrap();
        let expected = (-0.1f64 * tau).exp() * (0.5 * 0.5 * tau * tau + tau).cos();
        assert_close(out.x, expected, 1e-14, "⟨σx⟩(τ)");
    }

    #[test]
    fn evolve_conserves_z() {
        let drive = DrivingProtocol { omega0: 1.0, delta: 2.0 };
        let noise = NoiseModel { gamma: 0.3 };
        let state = PauliVector { x: 0.0, y: 0.0, z: 1.0 };
        let out = evolve(&state, 0.0, 5.0, &drive, &noise).unwrap();
        assert_eq!((out.x, out.y, out.z), (0.0, 0.0, 1.0));
    }

    #[test]
    fn quarter_turn_sends_x_to_y() {
        // γ = 0, Δ = 0, ω0 = 1, τ = π/2: (1,0,0) → (0,+1,0).
        let drive = DrivingProtocol { omega0: 1.0, delta: 0.0 };
        let noise = NoiseModel::dephasing_free();
        let out = evolve(&plus_state(), 0.0, FRAC_PI_2, &drive, &noise).unwrap();
        assert_close(out.x, 0.0, 1e-15, "x after quarter turn");
        assert_close(out.y, 1.0, 1e-15, "y after quarter turn");
        // Same sign from the independent Bloch-ODE integration.
        let xy = rk4_bloch([1.0, 0.0], 0.0, FRAC_PI_2, &drive, 0.0, 10_000);
        assert_close(xy[1], 1.0, 1e-9, "oracle y sign");
    }

    #[test]
    fn measurement_dephasing_examples() {
        let m = |x, y, z| measurement_dephasing_x(&PauliVector { x, y, z });
        assert_eq!(m(1.0, 0.0, 0.0), PauliVector { x: 1.0, y: 0.0, z: 0.0 });
        assert_eq!(m(0.0, 1.0, 0.0), PauliVector { x: 0.0, y: 0.0, z: 0.0 });
        assert_eq!(m(0.3, 0.4, 0.5), PauliVector { x: 0.3, y: 0.0, z: 0.0 });
    }

    #[test]
    fn plus_state_is_unit_norm_x_eigenstate() {
        let s = plus_state();
        assert_eq!((s.x, s.y, s.z), (1.0, 0.0, 0.0));
        assert_eq!(s.norm_squared(), 1.0);
        // ⟨Π+⟩ = (1 + ⟨σx⟩)/2 = 1 on |+⟩.
        assert_eq!(0.5 * (1.0 + s.x), 1.0);
    }

    #[test]
    fn pauli_vector_validation() {
        assert!(PauliVector::new(0.6, 0.0, 0.8).is_ok());
        assert!(PauliVector::new(1.0, 1.0, 1.0).is_err());
        assert!(NoiseModel::new(-0.1).is_err());
        assert!(NoiseModel::new(f64::NAN).is_err());
    }

    #[test]
    fn undriven_limit_matches_fixed_frequency_rotation() {
        // Δ = 0 against the independent integrator at several times.
        let drive = DrivingProtocol { omega0: 1.0, delta: 0.0 };
        let noise = NoiseModel { gamma: 0.05 };
        for &tau in &[0.7, PI, 4.0] {
            let out = evolve(&plus_state(), 0.0, tau, &drive, &noise).unwrap();
            let xy = rk4_bloch([1.0, 0.0], 0.0, tau, &drive, 0.05, 40_000);
            assert_close(out.x, xy[0], 1e-8, "undriven x vs oracle");
            assert_close(out.y, xy[1], 1e-8, "undriven y vs oracle");
        }
    }
}
