//! Shared vocabulary for stationary points of the nonclassicality measures.

use crate::dynamics::{DrivingProtocol, NoiseModel};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExtremumError {
    #[error("tau must be positive and finite, got {0}")]
    NonPositiveTau(f64),
}

/// Which nonclassicality measure an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Witness,
    Steering,
}

impl Target {
    /// Value of the measure at (τ, Δ).
    pub fn value(self, tau: f64, drive: &DrivingProtocol, noise: &NoiseModel) -> f64 {
        match self {
            Target::Witness => crate::witness::witness_value(tau, drive, noise),
            Target::Steering => crate::steering::steering_value(tau, drive, noise),
        }
    }

    /// Dephasing-limited upper bound of the measure at τ.
    pub fn bound(self, tau: f64, noise: &NoiseModel) -> f64 {
        match self {
            Target::Witness => crate::witness::coherence_bound(tau, noise),
            Target::Steering => crate::steering::steering_bound(tau, noise),
        }
    }

    /// Partial derivative of the measure with respect to the chirp rate Δ.
    pub fn delta_derivative(self, tau: f64, drive: &DrivingProtocol, noise: &NoiseModel) -> f64 {
        match self {
            Target::Witness => crate::witness::witness_delta_derivative(tau, drive, noise),
            Target::Steering => crate::steering::steering_delta_derivative(tau, drive, noise),
        }
    }

    /// Smooth, γ-free factor of the Δ-derivative whose zeros are the
    /// stationary-point candidates; used for root bracketing.
    pub(crate) fn stationarity_bracket(self, tau: f64, delta: f64, omega0: f64) -> f64 {
        match self {
            Target::Witness => crate::witness::stationarity_bracket(tau, delta, omega0),
            Target::Steering => crate::steering::stationarity_bracket(tau, delta, omega0),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Witness => write!(f, "witness"),
            Target::Steering => write!(f, "steering"),
        }
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "witness" => Ok(Target::Witness),
            "steering" => Ok(Target::Steering),
            other => Err(format!("unknown target '{other}' (expected 'witness' or 'steering')")),
        }
    }
}

/// Solution family an extremum belongs to.
///
/// For the witness at ω0 = 0 the stationary chirps fall into four families
/// indexed by an integer k: `D0 = 8πk/τ²` (minima), `D1 = 4π(2k+1)/τ²`
/// (bound-saturating maxima) and `D2/D3 = 4(2πk ∓ arctan√15)/τ²` (secondary
/// maxima). For steering the families are `D1 = (2kπ - 2ω0τ)/τ²` (maxima)
/// and `D0 = ((2k+1)π - 2ω0τ)/τ²` (minima) at any ω0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    D0,
    D1,
    D2,
    D3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Maximum,
    Minimum,
}

/// A stationary point of witness or steering in Δ at fixed τ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremumSolution {
    /// Stationary chirp rate Δ.
    pub delta: f64,
    /// Closed-form family, when the root could be matched to one.
    pub branch: Option<Branch>,
    /// Integer index within the family.
    pub k: Option<i64>,
    pub kind: ExtremumKind,
    /// Target value at (τ, Δ). Analytic constructors report the γ = 0 value
    /// (multiply by the dephasing envelope for γ > 0); the numeric solver
    /// reports the value at the γ it was given.
    pub value: f64,
}

impl ExtremumSolution {
    pub fn is_maximum(&self) -> bool {
        self.kind == ExtremumKind::Maximum
    }
}
