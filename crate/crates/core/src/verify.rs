//! Randomized cross-validation of the closed forms against the brute-force
//! oracle.
//!
//! Parameters are drawn from a seeded ChaCha stream over the physically
//! interesting box τ ∈ (0, 15], Δ ∈ [-2, 2], ω0 ∈ [0, 2], γ ∈ [0, 0.3], so a
//! run is reproducible from its seed alone.

use crate::dynamics::{DrivingProtocol, NoiseModel};
use crate::oracle::{self, IntegratorConfig, OracleError};
use crate::steering::steering_value;
use crate::witness::witness_value;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Cross-validation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    /// RK4 step of the oracle.
    pub step: f64,
    /// Largest tolerated |closed form − oracle|.
    pub tolerance: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { samples: 200, seed: 7, step: 1e-3, tolerance: 1e-6 }
    }
}

/// One random parameter tuple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleParams {
    pub tau: f64,
    pub delta: f64,
    pub omega0: f64,
    pub gamma: f64,
}

/// Worst-case disagreement observed for one quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub params: SampleParams,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_error: f64,
}

impl Deviation {
    fn none() -> Self {
        Self {
            params: SampleParams { tau: 0.0, delta: 0.0, omega0: 0.0, gamma: 0.0 },
            closed_form: 0.0,
            oracle: 0.0,
            abs_error: 0.0,
        }
    }

    fn update(&mut self, params: SampleParams, closed_form: f64, oracle: f64) {
        let abs_error = (closed_form - oracle).abs();
        if abs_error >= self.abs_error {
            *self = Self { params, closed_form, oracle, abs_error };
        }
    }
}

/// Cross-validation outcome; `passed` means both worst cases sit inside the
/// tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub samples: usize,
    pub seed: u64,
    pub step: f64,
    pub tolerance: f64,
    pub witness_worst: Deviation,
    pub steering_worst: Deviation,
    pub passed: bool,
}

/// Draw `samples` tuples from the verification box, reproducibly from `seed`.
pub fn sample_tuples(samples: usize, seed: u64) -> Vec<SampleParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| SampleParams {
            // τ ∈ (0, 15]: reflect the half-open unit draw.
            tau: 15.0 - rng.gen_range(0.0..15.0),
            delta: rng.gen_range(-2.0..=2.0),
            omega0: rng.gen_range(0.0..=2.0),
            gamma: rng.gen_range(0.0..=0.3),
        })
        .collect()
}

/// Compare witness and steering closed forms against the oracle on a seeded
/// sample set.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport, OracleError> {
    let integrator = IntegratorConfig::with_step(cfg.step)?;
    let mut witness_worst = Deviation::none();
    let mut steering_worst = Deviation::none();
    for params in sample_tuples(cfg.samples, cfg.seed) {
        let drive = DrivingProtocol { omega0: params.omega0, delta: params.delta };
        let noise = NoiseModel { gamma: params.gamma };

        let w_closed = witness_value(params.tau, &drive, &noise);
        let w_oracle = oracle::witness_oracle(params.tau, &drive, &noise, &integrator)?;
        witness_worst.update(params, w_closed, w_oracle);

        let s_closed = steering_value(params.tau, &drive, &noise);
        let s_oracle = oracle::steering_oracle(params.tau, &drive, &noise, &integrator)?;
        steering_worst.update(params, s_closed, s_oracle);
    }
    let passed = witness_worst.abs_error < cfg.tolerance && steering_worst.abs_error < cfg.tolerance;
    Ok(VerifyReport {
        samples: cfg.samples,
        seed: cfg.seed,
        step: cfg.step,
        tolerance: cfg.tolerance,
        witness_worst,
        steering_worst,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_reproducible_and_in_box() {
        let a = sample_tuples(64, 42);
        let b = sample_tuples(64, 42);
        assert_eq!(a, b);
        let c = sample_tuples(64, 43);
        assert_ne!(a, c);
        for p in &a {
            assert!(p.tau > 0.0 && p.tau <= 15.0);
            assert!((-2.0..=2.0).contains(&p.delta));
            assert!((0.0..=2.0).contains(&p.omega0));
            assert!((0.0..=0.3).contains(&p.gamma));
        }
    }

    #[test]
    fn small_run_passes_and_reports_worst_cases() {
        let cfg = VerifyConfig { samples: 8, seed: 11, step: 1e-3, tolerance: 1e-6 };
        let report = run_verify(&cfg).unwrap();
        assert!(report.passed, "witness worst {:?}", report.witness_worst);
        assert!(report.witness_worst.abs_error < 1e-6);
        assert!(report.steering_worst.abs_error < 1e-6);
        // Worst cases carry the parameters they occurred at.
        assert!(report.witness_worst.params.tau > 0.0);
    }

    #[test]
    fn impossible_tolerance_fails_the_run() {
        let cfg = VerifyConfig { samples: 4, seed: 11, step: 1e-3, tolerance: 1e-18 };
        let report = run_verify(&cfg).unwrap();
        assert!(!report.passed);
    }
}
