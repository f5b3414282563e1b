//! Brute-force verification path for the closed forms.
//!
//! Everything here works in the Schrödinger picture on an explicit 2×2
//! density matrix: the dephasing master equation
//!
//! ```text
//! dρ/dt = -i [H(t), ρ] + (γ/2) (σz ρ σz - ρ),    H(t) = ω(t) σz / 2
//! ```
//!
//! is integrated with fixed-step classical RK4, measurements are carried out
//! by explicit projector algebra, and the witness and steering protocols are
//! simulated literally. None of it reuses the closed-form propagator, so
//! agreement between the two routes is a genuine cross-check.

use crate::dynamics::{DrivingProtocol, NoiseModel, PauliVector};
use num_complex::Complex64 as C64;
use thiserror::Error;

/// Raw 2×2 complex matrix, row major.
pub type Matrix2 = [[C64; 2]; 2];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn sigma_x() -> Matrix2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

fn sigma_y() -> Matrix2 {
    [[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]]
}

fn sigma_z() -> Matrix2 {
    [[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]]
}

fn mat_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn mat_add(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][j] + b[i][j];
        }
    }
    out
}

fn mat_sub(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][j] - b[i][j];
        }
    }
    out
}

fn mat_scale(a: &Matrix2, s: C64) -> Matrix2 {
    let mut out = *a;
    for row in &mut out {
        for entry in row.iter_mut() {
            *entry *= s;
        }
    }
    out
}

fn adjoint(a: &Matrix2) -> Matrix2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn mat_trace(a: &Matrix2) -> C64 {
    a[0][0] + a[1][1]
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("integrator step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("time interval is reversed: t0 = {t0} > t1 = {t1}")]
    ReversedInterval { t0: f64, t1: f64 },
    #[error("non-finite time input: {name} = {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error(
        "integrating [{t0}, {t1}] at step {step} needs {needed} steps, over the budget of {max}"
    )]
    StepBudgetExceeded { t0: f64, t1: f64, step: f64, needed: usize, max: usize },
    #[error("not a valid density matrix: {reason}")]
    InvalidState { reason: String },
}

/// 2×2 Hermitian, unit-trace, positive-semidefinite state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: Matrix2,
}

/// Validation slack: Hermiticity and trace to 1e-12, eigenvalues ≥ -1e-9.
pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_SLACK: f64 = 1e-9;

impl DensityMatrix {
    /// Wrap a raw matrix after checking the state invariants.
    pub fn from_matrix(m: Matrix2) -> Result<Self, OracleError> {
        let rho = Self { m };
        rho.validate()?;
        Ok(rho)
    }

    /// Pure state |ψ⟩⟨ψ| from (not necessarily normalized) amplitudes.
    pub fn pure(psi: [C64; 2]) -> Self {
        let norm_sq = psi[0].norm_sqr() + psi[1].norm_sqr();
        let mut m = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = psi[i] * psi[j].conj() / norm_sq;
            }
        }
        Self { m }
    }

    /// ρ = (I + xσx + yσy + zσz)/2.
    pub fn from_bloch(state: &PauliVector) -> Self {
        let (x, y, z) = (state.x, state.y, state.z);
        Self {
            m: [
                [C64::new(0.5 * (1.0 + z), 0.0), C64::new(0.5 * x, -0.5 * y)],
                [C64::new(0.5 * x, 0.5 * y), C64::new(0.5 * (1.0 - z), 0.0)],
            ],
        }
    }

    pub fn maximally_mixed() -> Self {
        Self { m: [[C64::new(0.5, 0.0), ZERO], [ZERO, C64::new(0.5, 0.0)]] }
    }

    /// σx eigenstates |±⟩.
    pub fn plus() -> Self {
        Self::pure([ONE, ONE])
    }

    pub fn minus() -> Self {
        Self::pure([ONE, -ONE])
    }

    /// σy eigenstates.
    pub fn sigma_y_plus() -> Self {
        Self::pure([ONE, C64::new(0.0, 1.0)])
    }

    pub fn sigma_y_minus() -> Self {
        Self::pure([ONE, C64::new(0.0, -1.0)])
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.m
    }

    pub fn trace(&self) -> C64 {
        mat_trace(&self.m)
    }

    /// Real part of tr(ρ A) for a Hermitian observable A.
    pub fn expectation(&self, op: &Matrix2) -> f64 {
        mat_trace(&mat_mul(&self.m, op)).re
    }

    /// Bloch components (⟨σx⟩, ⟨σy⟩, ⟨σz⟩).
    pub fn bloch(&self) -> (f64, f64, f64) {
        (
            self.expectation(&sigma_x()),
            self.expectation(&sigma_y()),
            self.expectation(&sigma_z()),
        )
    }

    /// Largest entrywise deviation from ρ = ρ†.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = adjoint(&self.m);
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.m[i][j] - adj[i][j]).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let t = self.trace().re;
        let det = (self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]).re;
        let disc = (t * t - 4.0 * det).max(0.0);
        0.5 * (t - disc.sqrt())
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        let herm = self.hermiticity_defect();
        if !(herm <= HERMITICITY_TOL) {
            return Err(OracleError::InvalidState {
                reason: format!("hermiticity defect {herm} exceeds {HERMITICITY_TOL}"),
            });
        }
        let tr = self.trace();
        if !((tr.re - 1.0).abs() <= TRACE_TOL && tr.im.abs() <= TRACE_TOL) {
            return Err(OracleError::InvalidState { reason: format!("trace {tr} is not 1") });
        }
        let min_eig = self.min_eigenvalue();
        if !(min_eig >= -POSITIVITY_SLACK) {
            return Err(OracleError::InvalidState {
                reason: format!("minimum eigenvalue {min_eig} below -{POSITIVITY_SLACK}"),
            });
        }
        Ok(())
    }
}

/// Fixed-step RK4 settings.
///
/// `step` is an upper bound on the step actually used: the interval is split
/// into `ceil(span/step)` equal steps. `max_steps` caps the total budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub step: f64,
    pub max_steps: usize,
}

impl IntegratorConfig {
    pub fn new(step: f64, max_steps: usize) -> Result<Self, OracleError> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(OracleError::InvalidStep(step));
        }
        Ok(Self { step, max_steps })
    }

    /// Config with the given step and the default budget.
    pub fn with_step(step: f64) -> Result<Self, OracleError> {
        Self::new(step, Self::default().max_steps)
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { step: 1e-3, max_steps: 20_000_000 }
    }
}

/// Right-hand side of the master equation at time `t`:
/// `-i[H(t), ρ] + (γ/2)(σz ρ σz - ρ)`. The result is traceless and Hermitian.
pub fn lindblad_rhs(
    rho: &DensityMatrix,
    t: f64,
    drive: &DrivingProtocol,
    noise: &NoiseModel,
) -> Matrix2 {
    rhs_raw(&rho.m, t, drive, noise)
}

fn rhs_raw(rho: &Matrix2, t: f64, drive: &DrivingProtocol, noise: &NoiseModel) -> Matrix2 {
    let sz = sigma_z();
    let h = mat_scale(&sz, C64::new(0.5 * drive.frequency(t), 0.0));
    let commutator = mat_sub(&mat_mul(&h, rho), &mat_mul(rho, &h));
    let unitary = mat_scale(&commutator, C64::new(0.0, -1.0));
    let dephasing = mat_scale(
        &mat_sub(&mat_mul(&mat_mul(&sz, rho), &sz), rho),
        C64::new(0.5 * noise.gamma, 0.0),
    );
    mat_add(&unitary, &dephasing)
}

/// Integrate the master equation from `t0` to `t1` with classical RK4.
///
/// After every step the iterate is re-Hermitized, ρ ← (ρ + ρ†)/2, and the
/// trace renormalized to 1; this suppresses rounding drift without touching
/// the O(step⁴) convergence order.
pub fn integrate(
    rho0: &DensityMatrix,
    t0: f64,
    t1: f64,
    drive: &DrivingProtocol,
    noise: &NoiseModel,
    cfg: &IntegratorConfig,
) -> Result<DensityMatrix, OracleError> {
    for (name, value) in [("t0", t0), ("t1", t1)] {
        if !value.is_finite() {
            return Err(OracleError::NonFinite { name, value });
        }
    }
    if t0 > t1 {
        return Err(OracleError::ReversedInterval { t0, t1 });
    }
    if !(cfg.step > 0.0) || !cfg.step.is_finite() {
        return Err(OracleError::InvalidStep(cfg.step));
    }
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(*rho0);
    }
    let needed = (span / cfg.step).ceil() as usize;
    if needed > cfg.max_steps {
        return Err(OracleError::StepBudgetExceeded {
            t0,
            t1,
            step: cfg.step,
            needed,
            max: cfg.max_steps,
        });
    }
    let h = span / needed as f64;
    let hc = C64::new(h, 0.0);
    let half = C64::new(0.5, 0.0);
    let mut m = rho0.m;
    for i in 0..needed {
        let t = t0 + i as f64 * h;
        let k1 = rhs_raw(&m, t, drive, noise);
        let k2 = rhs_raw(&mat_add(&m, &mat_scale(&k1, half * hc)), t + 0.5 * h, drive, noise);
        let k3 = rhs_raw(&mat_add(&m, &mat_scale(&k2, half * hc)), t + 0.5 * h, drive, noise);
        let k4 = rhs_raw(&mat_add(&m, &mat_scale(&k3, hc)), t + h, drive, noise);
        let mut incr = mat_add(&k1, &k4);
        incr = mat_add(&incr, &mat_scale(&mat_add(&k2, &k3), C64::new(2.0, 0.0)));
        m = mat_add(&m, &mat_scale(&incr, hc / C64::new(6.0, 0.0)));
        // restore Hermiticity and unit trace
        m = mat_scale(&mat_add(&m, &adjoint(&m)), half);
        let tr = mat_trace(&m).re;
        m = mat_scale(&m, C64::new(1.0 / tr, 0.0));
    }
    Ok(DensityMatrix { m })
}

/// Projector onto |+⟩: (I + σx)/2.
fn projector_plus() -> Matrix2 {
    let h = C64::new(0.5, 0.0);
    [[h, h], [h, h]]
}

/// Projector onto |−⟩: (I − σx)/2.
fn projector_minus() -> Matrix2 {
    let h = C64::new(0.5, 0.0);
    let mh = C64::new(-0.5, 0.0);
    [[h, mh], [mh, h]]
}

/// Nonselective σx measurement: ρ ↦ Π₊ρΠ₊ + Π₋ρΠ₋. Idempotent.
pub fn nonselective_measure_x(rho: &DensityMatrix) -> DensityMatrix {
    let plus = projector_plus();
    let minus = projector_minus();
    let kept_plus = mat_mul(&mat_mul(&plus, &rho.m), &plus);
    let kept_minus = mat_mul(&mat_mul(&minus, &rho.m), &minus);
    DensityMatrix { m: mat_add(&kept_plus, &kept_minus) }
}

/// Both branch probabilities of the witness protocol, simulated literally:
/// evolve |+⟩⟨+| to τ for `p+`; evolve to τ/2, measure σx nonselectively,
/// evolve on to τ for `p'+`. Probabilities are ⟨Π₊⟩.
pub fn witness_oracle_probabilities(
    tau: f64,
    drive: &DrivingProtocol,
    noise: &NoiseModel,
    cfg: &IntegratorConfig,
) -> Result<(f64, f64), OracleError> {
    let initial = DensityMatrix::plus();
    let plus = projector_plus();

    let undisturbed = integrate(&initial, 0.0, tau, drive, noise, cfg)?;
    let p_plus = undisturbed.expectation(&plus);

    let at_half = integrate(&initial, 0.0, 0.5 * tau, drive, noise, cfg)?;
    let measured = nonselective_measure_x(&at_half);
    let disturbed = integrate(&measured, 0.5 * tau, tau, drive, noise, cfg)?;
    let p_plus_measured = disturbed.expectation(&plus);

    Ok((p_plus, p_plus_measured))
}

/// Quantum witness by direct protocol simulation: `|p+ - p'+|`.
pub fn witness_oracle(
    tau: f64,
    drive: &DrivingProtocol,
    noise: &NoiseModel,
    cfg: &IntegratorConfig,
) -> Result<f64, OracleError> {
    let (p, p_measured) = witness_oracle_probabilities(tau, drive, noise, cfg)?;
    Ok((p - p_measured).abs())
}

/// Squared conditional expectation ⟨B⟩² of each steering branch, in the order
/// (|+⟩, σx), (|−⟩, σx), (|y+⟩, σy), (|y−⟩, σy).
///
/// Alice's measurement of the maximally mixed state projects onto one of the
/// four eigenstates with probability 1/2 per basis; Bob measures the same
/// Pauli operator at τ. All four contributions are equal by symmetry.
pub fn steering_oracle_branches(
    tau: f64,
    drive: &DrivingProtocol,
    noise: &NoiseModel,
    cfg: &IntegratorConfig,
) -> Result<[f64; 4], OracleError> {
    let branches = [
        (DensityMatrix::plus(), sigma_x()),
        (DensityMatrix::minus(), sigma_x()),
        (DensityMatrix::sigma_y_plus(), sigma_y()),
        (DensityMatrix::sigma_y_minus(), sigma_y()),
    ];
    let mut out = [0.0; 4];
    for (slot, (state, observable)) in out.iter_mut().zip(branches.iter()) {
        let evolved = integrate(state, 0.0, tau, drive, noise, cfg)?;
        let b = evolved.expectation(observable);
        *slot = b * b;
    }
    Ok(out)
}

/// Steering parameter by direct protocol simulation:
/// `S2 = Σ_branches ½ ⟨B⟩²` over the σx and σy bases.
pub fn steering_oracle(
    tau: f64,
    drive: &DrivingProtocol,
    noise: &NoiseModel,
    cfg: &IntegratorConfig,
) -> Result<f64, OracleError> {
    let branches = steering_oracle_branches(tau, drive, noise, cfg)?;
    Ok(0.5 * branches.iter().sum::<f64>())
}
