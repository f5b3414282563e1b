//! Nonclassicality of a linearly driven two-level system with dephasing.
//!
//! The qubit Hamiltonian is `H(t) = ω(t) σz / 2` with a linear frequency ramp
//! `ω(t) = ω0 + Δ·t`, subject to pure dephasing at rate γ. Two nonclassicality
//! measures are provided in closed form:
//!
//! * the **quantum witness** `Wq(τ)` — the measurable difference between the
//!   σx outcome statistics at time τ with and without a nonselective σx
//!   measurement at τ/2 ([`witness`]);
//! * the **temporal steering parameter** `S2(τ)` over the σx/σy bases, whose
//!   value above 1 certifies stronger-than-classical temporal correlations
//!   ([`steering`]).
//!
//! Both depend strongly on the chirp rate Δ. The [`solvers`] module locates
//! the stationary points of either quantity in Δ at fixed τ and picks the
//! drive that maximizes it ("tailoring"), [`sweep`] produces (τ, Δ) grids and
//! time traces with extremum overlay curves, and [`oracle`] re-derives every
//! closed form by brute-force Runge-Kutta integration of the dephasing master
//! equation so the two routes can be cross-checked ([`verify`]).
//!
//! Everything works in natural units (ħ = 1, times in units of 1/ω0 ≈ 1) and
//! every public function is pure, so values can be shared freely across
//! threads.

pub mod dynamics;
pub mod extremum;
pub mod oracle;
pub mod solvers;
pub mod steering;
pub mod sweep;
pub mod verify;
pub mod witness;

pub use dynamics::{
    evolve, measurement_dephasing_x, phase_integral, plus_state, propagator, DrivingProtocol,
    DynamicsError, NoiseModel, PauliVector, PropagatorBlock,
};
pub use extremum::{Branch, ExtremumError, ExtremumKind, ExtremumSolution, Target};
pub use oracle::{
    integrate, lindblad_rhs, nonselective_measure_x, steering_oracle, witness_oracle,
    DensityMatrix, IntegratorConfig, OracleError,
};
pub use solvers::{find_extrema, tailor, SearchWindow, SolverError, TailorResult};
pub use steering::{
    steering_bound, steering_delta_derivative, steering_extrema, steering_point, steering_value,
    SteeringPoint, CLASSICAL_STEERING_BOUND,
};
pub use sweep::{
    export_grid, export_trace, grid, overlay_extrema, trace, ExportFormat, GridSpec, OverlayCurve,
    SweepError, SweepGrid, Trace, TracePoint,
};
pub use verify::{run_verify, sample_tuples, Deviation, SampleParams, VerifyConfig, VerifyReport};
pub use witness::{
    analytic_extrema_zero_omega, coherence_bound, prob_plus_measured, prob_plus_unmeasured,
    witness_delta_derivative, witness_point, witness_value, WitnessPoint,
};
